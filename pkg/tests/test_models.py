import numpy as np
import pytest

from qcorrelate.batteries import random_nondegenerate
from qcorrelate.correlation import joint_term_table
from qcorrelate.errors import NotEigenbasis
from qcorrelate.linalg import Observable, is_unitary, max_abs, random_state, random_unitary, tensor
from qcorrelate.measurement import is_precise_for_all_states
from qcorrelate.models import (
    build_von_neumann,
    ozawa_counterexample,
    product_state_example,
    verify_von_neumann,
)

from conftest import I2, PLUS, SX, SZ

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])


class TestBuildVonNeumann:
    def test_sigma_z_is_cnot(self):
        m = build_von_neumann(SZ)
        np.testing.assert_array_equal(m.process.unitary, CNOT)
        np.testing.assert_array_equal(m.process.meter.matrix, SZ)
        np.testing.assert_array_equal(m.process.xi, [1, 0])

    def test_defining_relation(self, rng):
        for d in (2, 3, 4, 5):
            a = random_nondegenerate(rng, d)
            m = build_von_neumann(a, xi_index=int(rng.integers(d)))
            p = m.process
            assert is_unitary(p.unitary)
            for n in range(d):
                lhs = p.unitary @ tensor(m.eigenbasis[:, n], p.xi)
                rhs = tensor(m.eigenbasis[:, n], m.probe_basis[:, n])
                np.testing.assert_allclose(lhs, rhs, atol=1e-12)

    def test_identity_observable(self):
        m = build_von_neumann(np.eye(3))
        assert is_unitary(m.process.unitary)
        np.testing.assert_allclose(m.process.meter.matrix, np.eye(3))
        assert is_precise_for_all_states(m.process, np.eye(3))

    def test_degenerate(self):
        m = build_von_neumann(np.diag([1.0, 1.0, -1.0]))
        assert list(m.process.meter.values) == [-1.0, 1.0]
        assert is_precise_for_all_states(m.process, np.diag([1.0, 1.0, -1.0]))

    def test_bad_eigenbasis(self):
        with pytest.raises(NotEigenbasis):
            build_von_neumann(SZ, eigenbasis=np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        with pytest.raises(NotEigenbasis):
            build_von_neumann(SZ, eigenbasis=np.array([[1, 1], [0, 1]]))


class TestVerifyVonNeumann:
    def test_sigma_z(self):
        r = verify_von_neumann(build_von_neumann(SZ), psi_samples=100)
        assert r.all_passed

    def test_broken_unitary(self):
        m = build_von_neumann(SZ)
        from dataclasses import replace

        from qcorrelate.measurement import MeasuringProcess

        broken = replace(m, process=MeasuringProcess.create(2, 2, m.process.xi, np.eye(4), m.process.meter))
        r = verify_von_neumann(broken, psi_samples=10)
        assert not r.value_reproducing

    def test_eigenstate_samples(self):
        # With A diagonal and psi an eigenvector, every check is trivially satisfied.
        m = build_von_neumann(np.diag([1.0, 2.0, 3.0]))
        r = verify_von_neumann(m, psi_samples=5)
        assert r.all_passed


class TestOzawaCounterexample:
    def test_moments(self):
        oz = ozawa_counterexample()
        assert oz.moments["X"] == pytest.approx((1, 2, 4), abs=1e-9)
        assert oz.moments["Y"] == pytest.approx((1, 2, 3), abs=1e-9)

    def test_heisenberg_consistent(self):
        oz = ozawa_counterexample()
        u = oz.evolution
        assert max_abs(u.conj().T @ oz.X.matrix @ u - oz.Y.matrix) <= 1e-12
        assert oz.checks["changed_as_operator"]
        assert oz.checks["same_action_on_psi"]


class TestProductState:
    def test_eigenstate(self):
        ps = product_state_example(SZ, np.array([0, 1]))
        assert ps.checks["perfectly_correlated"] and ps.checks["rms_zero"]

    def test_plus(self):
        ps = product_state_example(SZ, PLUS)
        assert ps.checks["equally_distributed"]
        assert ps.checks["statistically_independent"]
        assert not ps.checks["perfectly_correlated"]
        t = joint_term_table(ps.X, ps.Y, ps.psi)
        np.testing.assert_allclose(t.terms, 0.25, atol=1e-12)

    def test_identity(self, rng):
        ps = product_state_example(I2, random_state(rng, 2))
        assert ps.checks["perfectly_correlated"]

    def test_random_factorizes(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 4))
            u = random_unitary(rng, d)
            b = u @ np.diag(rng.integers(-2, 3, size=d).astype(float)) @ u.conj().T
            ps = product_state_example(b, random_state(rng, d))
            assert ps.checks["statistically_independent"] and ps.checks["equally_distributed"]
            # Not an eigenstate  <=>  X psi != Y psi.
            assert ps.checks["phi_is_eigenstate"] == ps.checks["rms_zero"]

    def test_swap_relates_pair(self):
        ps = product_state_example(SX, PLUS)
        np.testing.assert_allclose(ps.evolution.conj().T @ ps.X.matrix @ ps.evolution, np.kron(I2, SX))
