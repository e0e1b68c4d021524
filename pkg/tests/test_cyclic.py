import numpy as np
import pytest

from qcorrelate.batteries import pair_battery
from qcorrelate.cyclic import (
    common_eigenstate_decomposition,
    cyclic_subspace,
    equal_distribution_certificate,
    theorem2_report,
)
from qcorrelate.errors import NotDecomposable
from qcorrelate.linalg import Observable, max_abs, random_hermitian, random_state
from qcorrelate.models import ozawa_counterexample

from conftest import I2, PLUS, SX, SZ


def krylov_rank(X, psi, tol=1e-9):
    """Oracle: rank of [psi, X psi, X^2 psi, ...] by Gram-Schmidt."""
    basis, v = [], np.asarray(psi, dtype=complex)
    for _ in range(len(psi)):
        w = v.copy()
        for b in basis:
            w -= np.vdot(b, w) * b
        if np.linalg.norm(w) > tol:
            basis.append(w / np.linalg.norm(w))
        v = X @ v
    return len(basis)


class TestCyclicSubspace:
    def test_eigenstate(self):
        c = cyclic_subspace(SZ, np.array([1, 0]))
        assert c.dim == 1
        np.testing.assert_allclose(np.abs(c.basis[:, 0]), [1, 0])

    def test_sigma_x(self):
        c = cyclic_subspace(SX, np.array([1, 0]))
        assert c.dim == krylov_rank(SX, np.array([1, 0])) == 2

    def test_full(self):
        psi = np.array([1, 1, 1]) / np.sqrt(3)
        assert cyclic_subspace(np.diag([1.0, 2.0, 3.0]), psi).dim == 3

    def test_counterexample_dim(self):
        oz = ozawa_counterexample()
        c = cyclic_subspace(oz.X, oz.psi)
        assert c.dim == krylov_rank(oz.X.matrix, oz.psi) == 2

    def test_against_krylov_random(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 7))
            u = np.linalg.qr(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))[0]
            x = u @ np.diag(rng.integers(-1, 2, size=d).astype(float)) @ u.conj().T
            psi = random_state(rng, d)
            assert cyclic_subspace(x, psi).dim == krylov_rank(x, psi)

    def test_invariance_and_minimality(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 7))
            X = Observable.from_matrix(random_hermitian(rng, d))
            psi = random_state(rng, d)
            c = cyclic_subspace(X, psi)
            P = c.projection
            assert max_abs(X.matrix @ P - P @ X.matrix) <= 1e-9
            np.testing.assert_allclose(P @ psi, psi, atol=1e-12)
            for e in X.projections:
                assert max_abs(e @ P - P @ e) <= 1e-9
            for k in range(c.dim):
                v = c.basis[:, k]
                assert np.linalg.norm(X.matrix @ v - c.eigenvalues[k] * v) <= 1e-9

    def test_samples_on_sphere(self, rng):
        c = cyclic_subspace(np.diag([1.0, 2.0, 3.0, 4.0]), np.array([0.5, 0.5, 0.5, 0.5]))
        for _ in range(10):
            phi = c.sample(rng)
            assert np.linalg.norm(phi) == pytest.approx(1.0)
            np.testing.assert_allclose(c.projection @ phi, phi, atol=1e-12)


class TestCyclicConditions:
    def test_bell(self, bell_pair):
        r = theorem2_report(*bell_pair)
        assert r.conditions == (True,) * 5

    def test_counterexample(self):
        oz = ozawa_counterexample()
        r = theorem2_report(oz.X, oz.Y, oz.psi)
        assert r.conditions == (False,) * 5
        # Independent oracle: on span{e1, e2} the two act as different 2x2 blocks.
        P = np.diag([1, 1, 0, 0])
        assert max_abs(oz.X.matrix @ P - oz.Y.matrix @ P) == 1.0

    def test_identical(self, rng):
        x = random_hermitian(rng, 4)
        assert theorem2_report(x, x, random_state(rng, 4)).conditions == (True,) * 5

    def test_deterministic_seed(self, bell_pair):
        assert theorem2_report(*bell_pair, seed=3) == theorem2_report(*bell_pair, seed=3)

    def test_battery_agrees(self):
        for inst in pair_battery(100, seed=11):
            assert theorem2_report(inst.X, inst.Y, inst.psi).consistent, inst.family


class TestCommonEigenstates:
    def test_bell(self, bell_pair):
        parts = common_eigenstate_decomposition(*bell_pair)
        assert sorted(parts) == [-1.0, 1.0]
        for v in parts.values():
            assert np.vdot(v, v).real == pytest.approx(0.5)
        np.testing.assert_allclose(np.abs(parts[1.0]), np.array([1, 0, 0, 0]) / np.sqrt(2), atol=1e-12)
        np.testing.assert_allclose(np.abs(parts[-1.0]), np.array([0, 0, 0, 1]) / np.sqrt(2), atol=1e-12)

    def test_eigenstate(self):
        parts = common_eigenstate_decomposition(SZ, SZ, np.array([1, 0]))
        assert list(parts) == [1.0]
        np.testing.assert_allclose(parts[1.0], [1, 0], atol=1e-12)

    def test_counterexample(self):
        oz = ozawa_counterexample()
        with pytest.raises(NotDecomposable):
            common_eigenstate_decomposition(oz.X, oz.Y, oz.psi)

    def test_components_orthogonal_and_sum(self):
        for inst in pair_battery(100, seed=12):
            try:
                parts = common_eigenstate_decomposition(inst.X, inst.Y, inst.psi)
            except NotDecomposable:
                continue
            vs = list(parts.values())
            np.testing.assert_allclose(sum(vs), inst.psi, atol=1e-9)
            for i in range(len(vs)):
                for j in range(i + 1, len(vs)):
                    assert abs(np.vdot(vs[i], vs[j])) <= 1e-9


class TestEqualDistributionCertificate:
    def test_identical(self, rng):
        x = random_hermitian(rng, 3)
        assert equal_distribution_certificate(x, x, random_state(rng, 3))

    def test_bell(self, bell_pair):
        assert equal_distribution_certificate(*bell_pair)

    def test_product_state(self):
        assert not equal_distribution_certificate(np.kron(SZ, I2), np.kron(I2, SZ), np.kron(PLUS, PLUS))

    def test_sampled_equal_distribution(self):
        # The certificate agrees with equal distribution on sampled unit vectors of the cyclic subspace.
        from qcorrelate.correlation import equally_distributed

        rng = np.random.default_rng(4)
        for inst in pair_battery(60, seed=13):
            cert = equal_distribution_certificate(inst.X, inst.Y, inst.psi)
            c = cyclic_subspace(inst.X, inst.psi)
            sampled = all(equally_distributed(inst.X, inst.Y, c.sample(rng)) for _ in range(8))
            assert cert == sampled, inst.family
