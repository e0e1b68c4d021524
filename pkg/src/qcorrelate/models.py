"""Concrete fixtures: the von Neumann measurement model and the two Heisenberg-pair examples."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correlation import TOL, is_perfectly_correlated, joint_term_table, rms_difference
from .errors import DimensionMismatch, NotEigenbasis, NumericalInconsistency
from .linalg import (
    TOL_OP,
    Observable,
    as_matrix,
    as_state,
    conjugate,
    dagger,
    ensure_observable,
    expectation,
    max_abs,
    outer,
    random_state,
    tensor,
)
from .measurement import MeasuringProcess, heisenberg_meter, lift


@dataclass(frozen=True)
class VonNeumannModel:
    """Measurement of ``A = sum_n a_n |phi_n><phi_n|`` by a probe copy of the system.

    ``eigenbasis`` holds ``phi_n`` as columns and ``eigenvalues`` the matching
    ``a_n`` (repeats allowed).  ``probe_basis`` holds ``eta_m`` as columns with
    ``eta_0 = xi``; the meter basis is ``xi_n = eta_n``.
    """

    observable: Observable
    eigenvalues: np.ndarray
    eigenbasis: np.ndarray
    probe_basis: np.ndarray
    process: MeasuringProcess
    xi_index: int = 0

    @property
    def dim(self) -> int:
        return self.observable.dim


def build_von_neumann(A, eigenbasis=None, xi_index: int = 0, tol: float = TOL_OP) -> VonNeumannModel:
    """Construct the model for ``A``.

    Without an explicit ``eigenbasis`` the standard basis is used when ``A`` is
    diagonal, otherwise the ``eigh`` eigenvectors.  The probe space has the
    same dimension as the system, ``xi`` is the standard basis vector
    ``xi_index`` and ``eta_m = e_{(xi_index + m) mod d}``.  The interaction is
    ``U (phi_n (x) eta_m) = phi_n (x) eta_{(m + n) mod d}``, which sends
    ``phi_n (x) xi`` to ``phi_n (x) xi_n``.

    Raises
    ------
    NotEigenbasis
        If ``eigenbasis`` is not orthonormal or does not diagonalize ``A``.
    """
    A = ensure_observable(A)
    d = A.dim
    if eigenbasis is None:
        if max_abs(A.matrix - np.diag(np.diag(A.matrix))) <= tol:
            eigenbasis = np.eye(d, dtype=complex)
        else:
            eigenbasis = np.linalg.eigh(A.matrix)[1]
    phi = as_matrix(eigenbasis)
    if phi.shape != (d, d):
        raise DimensionMismatch(f"eigenbasis has shape {phi.shape}, expected {(d, d)}")
    if max_abs(dagger(phi) @ phi - np.eye(d)) > tol:
        raise NotEigenbasis("eigenbasis columns are not orthonormal")
    a = np.real(np.einsum("in,ij,jn->n", phi.conj(), A.matrix, phi))
    if max_abs(A.matrix @ phi - phi * a) > tol:
        raise NotEigenbasis("eigenbasis does not diagonalize the observable")
    if not 0 <= xi_index < d:
        raise ValueError(f"xi_index must lie in [0, {d})")

    eta = np.roll(np.eye(d, dtype=complex), -xi_index, axis=1)
    U = np.zeros((d * d, d * d), dtype=complex)
    for n in range(d):
        for m in range(d):
            U += outer(tensor(phi[:, n], eta[:, (m + n) % d]), tensor(phi[:, n], eta[:, m]))
    meter = sum(a[n] * outer(eta[:, n]) for n in range(d))
    process = MeasuringProcess.create(d, d, eta[:, 0], U, meter)
    return VonNeumannModel(A, a, phi, eta, process, xi_index)


@dataclass(frozen=True)
class VonNeumannReport:
    invariant_subspace_identity: bool
    value_reproducing: bool
    repeatability: bool
    samples: int
    seed: int

    @property
    def all_passed(self) -> bool:
        return self.invariant_subspace_identity and self.value_reproducing and self.repeatability

    def to_dict(self) -> dict:
        return {
            "invariant_subspace_identity": bool(self.invariant_subspace_identity),
            "value_reproducing": bool(self.value_reproducing),
            "repeatability": bool(self.repeatability),
            "samples": int(self.samples),
            "seed": int(self.seed),
        }


def verify_von_neumann(model: VonNeumannModel, psi_samples: int = 100, seed: int = 0, tol: float = TOL) -> VonNeumannReport:
    """Check the model on ``H (x) span{xi}`` and in ``psi (x) xi`` for seeded random ``psi``.

    The three operators ``A (x) I``, ``U^dag (A (x) I) U`` and ``U^dag (I (x) M) U``
    must agree on the invariant subspace; the value-reproducing check pairs the
    first with the third, the repeatability check the second with the third.
    """
    p = model.process
    d = model.dim
    before = lift(model.observable, p.dim_k)
    after = conjugate(before, p.unitary)
    meter = heisenberg_meter(p)

    restrict = tensor(np.eye(d), outer(p.xi))
    ops = [before.matrix @ restrict, after.matrix @ restrict, meter.matrix @ restrict]
    identity = max(max_abs(ops[0] - ops[1]), max_abs(ops[0] - ops[2])) <= tol

    rng = np.random.default_rng(seed)
    reproducing = repeatable = True
    for _ in range(psi_samples):
        joint = tensor(random_state(rng, d), p.xi)
        reproducing &= is_perfectly_correlated(before, meter, joint, tol).perfectly_correlated
        repeatable &= is_perfectly_correlated(after, meter, joint, tol).perfectly_correlated
    return VonNeumannReport(bool(identity), bool(reproducing), bool(repeatable), psi_samples, seed)


@dataclass(frozen=True)
class HeisenbergPairFixture:
    """An observable at two times, ``X = A(t1)`` and ``Y = A(t2) = U^dag X U``, in state ``psi``."""

    X: Observable
    Y: Observable
    evolution: np.ndarray
    psi: np.ndarray
    moments: dict[str, tuple[float, float, float]]
    checks: dict[str, bool] = field(default_factory=dict)


def _moments(X: Observable, psi: np.ndarray) -> tuple[float, float, float]:
    m = X.matrix
    return tuple(float(expectation(np.linalg.matrix_power(m, k), psi).real) for k in (1, 2, 3))


def ozawa_counterexample() -> HeisenbergPairFixture:
    """4x4 pair with ``X psi == Y psi`` whose third moments differ (4 versus 3)."""
    x = np.array([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 0]], dtype=complex)
    y = np.array([[1, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]], dtype=complex)
    u = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]], dtype=complex)
    psi = np.array([1, 0, 0, 0], dtype=complex)
    if max_abs(dagger(u) @ x @ u - y) > 1e-12:
        raise NumericalInconsistency("A(t2) != U^dag A(t1) U")
    X, Y = Observable.from_matrix(x), Observable.from_matrix(y)
    checks = {
        "heisenberg_consistent": True,
        "changed_as_operator": max_abs(x - y) > 0,
        "same_action_on_psi": max_abs(x @ psi - y @ psi) == 0,
    }
    return HeisenbergPairFixture(X, Y, u, psi, {"X": _moments(X, psi), "Y": _moments(Y, psi)}, checks)


def swap_operator(d: int) -> np.ndarray:
    s = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            s[j * d + i, i * d + j] = 1
    return s


def product_state_example(B, phi, tol: float = TOL) -> HeisenbergPairFixture:
    """``X = B (x) I``, ``Y = I (x) B`` in ``phi (x) phi``, related by the swap.

    ``checks`` records equal distribution and statistical independence
    (every joint term equals the product of its marginals), plus the
    perfect-correlation verdict for comparison.
    """
    B = ensure_observable(B)
    phi = as_state(phi)
    d = B.dim
    if phi.shape[0] != d:
        raise DimensionMismatch(f"state has dimension {phi.shape[0]}, observable has {d}")
    eye = np.eye(d)
    X = lift(B, d)
    swap = swap_operator(d)
    Y = conjugate(X, swap)
    psi = tensor(phi, phi)
    if max_abs(Y.matrix - tensor(eye, B.matrix)) > TOL_OP:
        raise NumericalInconsistency("swap does not carry B (x) I to I (x) B")

    marg = B.distribution(phi)
    table = joint_term_table(X, Y, psi)
    independent = max_abs(table.terms - np.outer(marg, marg)) <= tol
    verdict = is_perfectly_correlated(X, Y, psi, tol)
    checks = {
        "equally_distributed": verdict.equally_distributed,
        "statistically_independent": bool(independent),
        "perfectly_correlated": verdict.perfectly_correlated,
        "phi_is_eigenstate": bool(np.linalg.norm(B.matrix @ phi - expectation(B.matrix, phi) * phi) <= tol),
        "rms_zero": rms_difference(X, Y, psi) <= tol,
    }
    return HeisenbergPairFixture(X, Y, swap, psi, {"X": _moments(X, psi), "Y": _moments(Y, psi)}, checks)
