"""Dense complex linear algebra shared by every checker in the package.

Operators are plain ``numpy`` arrays of dtype ``complex128``; states are
one-dimensional complex arrays.  :class:`Observable` bundles a Hermitian
matrix with its spectral decomposition so the projections are computed once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AmbiguousOutcome,
    DimensionMismatch,
    NotHermitian,
    NotNormalized,
    NotProjection,
)

TOL_NORM = 1e-9
TOL_HERM = 1e-9
TOL_OP = 1e-9
TOL_PSD = 1e-9
CLUSTER_TOL = 1e-8
VALUE_MATCH_TOL = 1e-8
INTERSECTION_TOL = 1e-8


def as_matrix(m) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"expected a non-empty 2-d matrix, got shape {arr.shape}")
    return arr


def as_state(v, tol: float = TOL_NORM) -> np.ndarray:
    """Return ``v`` as a complex vector, checking that it has unit norm."""
    arr = np.asarray(v, dtype=complex).reshape(-1)
    if arr.size < 1:
        raise DimensionMismatch("state vector is empty")
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"state norm is {norm!r}, expected 1")
    return arr


def normalize(v) -> np.ndarray:
    arr = np.asarray(v, dtype=complex).reshape(-1)
    return arr / np.linalg.norm(arr)


def max_abs(a) -> float:
    """Max-absolute-entry norm used for every operator comparison."""
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(m))


def is_hermitian(m, tol: float = TOL_HERM) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and max_abs(m - dagger(m)) <= tol


def is_unitary(u, tol: float = TOL_OP) -> bool:
    u = as_matrix(u)
    if u.shape[0] != u.shape[1]:
        return False
    return max_abs(dagger(u) @ u - np.eye(u.shape[0])) <= tol


def outer(u, v=None) -> np.ndarray:
    """``|u><v|``; with one argument, the rank-one operator ``|u><u|``."""
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = u if v is None else np.asarray(v, dtype=complex).reshape(-1)
    return np.outer(u, np.conj(v))


def expectation(op, psi) -> complex:
    """``<psi|op|psi>`` with the bra conjugated."""
    return complex(np.vdot(psi, op @ psi))


@dataclass(frozen=True)
class SpectralDecomposition:
    """Distinct eigenvalues in increasing order, one projection per value."""

    values: np.ndarray
    projections: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.values) != len(self.projections):
            raise ValueError("one projection is required per eigenvalue")
        if np.any(np.diff(self.values) <= 0):
            raise ValueError("eigenvalues must be strictly increasing")

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(zip(self.values, self.projections))

    @property
    def dim(self) -> int:
        return self.projections[0].shape[0]

    def reconstruct(self) -> np.ndarray:
        return sum(x * p for x, p in self)

    def check(self, matrix=None, tol: float = TOL_OP) -> dict[str, bool]:
        """Evaluate resolution of identity, orthogonality and reconstruction."""
        n = self.dim
        resolution = max_abs(sum(self.projections) - np.eye(n)) <= tol
        orthogonal = all(
            max_abs(p @ q - (p if i == j else 0)) <= tol
            for i, p in enumerate(self.projections)
            for j, q in enumerate(self.projections)
        )
        out = {"resolution": resolution, "orthogonal": orthogonal}
        if matrix is not None:
            out["reconstruction"] = max_abs(self.reconstruct() - matrix) <= tol
        return out


def spectral_decompose(m, cluster_tol: float = CLUSTER_TOL, herm_tol: float = TOL_HERM) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix with eigenvalue clustering.

    Raw eigenvalues from ``eigh`` whose consecutive gap is at most
    ``cluster_tol * max(1, spectral radius)`` are merged into one value (their
    mean) and the corresponding eigenvectors form the projection.

    Raises
    ------
    NotHermitian
        If ``m`` differs from its adjoint by more than ``herm_tol``.
    """
    m = as_matrix(m)
    if not is_hermitian(m, herm_tol):
        raise NotHermitian(f"matrix of shape {m.shape} is not Hermitian within {herm_tol:g}")
    w, v = np.linalg.eigh(0.5 * (m + dagger(m)))
    radius = max(1.0, float(np.max(np.abs(w))))
    gap = cluster_tol * radius

    groups: list[list[int]] = [[0]]
    for i in range(1, len(w)):
        if w[i] - w[i - 1] <= gap:
            groups[-1].append(i)
        else:
            groups.append([i])

    values = np.array([float(np.mean(w[g])) for g in groups])
    projections = tuple(v[:, g] @ dagger(v[:, g]) for g in groups)
    return SpectralDecomposition(values, projections)


@dataclass(frozen=True)
class Observable:
    """Hermitian matrix with its spectral decomposition.

    Build with :meth:`from_matrix` (or just ``Observable.from_matrix(m)``);
    the direct constructor trusts the caller.
    """

    matrix: np.ndarray
    spectral: SpectralDecomposition = field(repr=False)

    @classmethod
    def from_matrix(cls, m, cluster_tol: float = CLUSTER_TOL) -> "Observable":
        m = as_matrix(m)
        return cls(m, spectral_decompose(m, cluster_tol))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def values(self) -> np.ndarray:
        return self.spectral.values

    @property
    def projections(self) -> tuple[np.ndarray, ...]:
        return self.spectral.projections

    def projection(self, x: float, value_match_tol: float = VALUE_MATCH_TOL) -> np.ndarray:
        """E(x): the spectral projection for ``x``, or zero if ``x`` is not an eigenvalue."""
        idx = np.flatnonzero(np.abs(self.values - x) <= value_match_tol)
        if len(idx) > 1:
            raise AmbiguousOutcome(f"value {x!r} matches several eigenvalues")
        if len(idx) == 0:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.projections[idx[0]]

    def apply(self, f) -> np.ndarray:
        """Functional calculus: ``f(X) = sum_x f(x) E(x)``."""
        return sum(f(x) * p for x, p in self.spectral)

    def distribution(self, psi) -> np.ndarray:
        """``<psi|E(x)|psi>`` for each eigenvalue, in order."""
        return np.array([expectation(p, psi).real for p in self.projections])


def ensure_observable(x, cluster_tol: float = CLUSTER_TOL) -> Observable:
    return x if isinstance(x, Observable) else Observable.from_matrix(x, cluster_tol)


def check_dims(*objs) -> int:
    """Common dimension of observables, matrices and state vectors."""
    dims = set()
    for o in objs:
        if isinstance(o, Observable):
            dims.add(o.dim)
        else:
            a = np.asarray(o)
            dims.update(a.shape)
    if len(dims) != 1:
        raise DimensionMismatch(f"inconsistent dimensions {sorted(dims)}")
    return dims.pop()


def tensor(*factors) -> np.ndarray:
    """Kronecker product of matrices or of state vectors, left to right."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0], dtype=complex)
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f, dtype=complex))
    return out


def partial_trace_second(t, dim_h: int, dim_k: int) -> np.ndarray:
    """Trace out the second factor of an operator on ``H (x) K``."""
    t = as_matrix(t)
    n = dim_h * dim_k
    if t.shape != (n, n):
        raise DimensionMismatch(f"operator of shape {t.shape} is not on a {dim_h}x{dim_k} product space")
    return np.einsum("ikjk->ij", t.reshape(dim_h, dim_k, dim_h, dim_k))


def is_projection(p, tol: float = TOL_OP) -> bool:
    p = as_matrix(p)
    return is_hermitian(p, tol) and max_abs(p @ p - p) <= tol


def subspace_intersection_projection(p, q, tol: float = INTERSECTION_TOL, op_tol: float = TOL_OP) -> np.ndarray:
    """Projection onto ``ran(p) & ran(q)``.

    The intersection is the eigenvalue-1 eigenspace of ``p q p``; eigenvalues
    within ``tol`` of 1 are accepted.
    """
    p, q = as_matrix(p), as_matrix(q)
    check_dims(p, q)
    if not (is_projection(p, op_tol) and is_projection(q, op_tol)):
        raise NotProjection("both arguments must be orthogonal projections")
    pqp = p @ q @ p
    w, v = np.linalg.eigh(0.5 * (pqp + dagger(pqp)))
    keep = np.abs(w - 1.0) <= tol
    basis = v[:, keep]
    return basis @ dagger(basis)


def orthonormal_columns(vectors: Iterable, tol: float = TOL_NORM) -> np.ndarray:
    """Gram-Schmidt (modified, with one reorthogonalization pass); drops dependent vectors."""
    cols: list[np.ndarray] = []
    for v in vectors:
        w = np.asarray(v, dtype=complex).reshape(-1).copy()
        for _ in range(2):
            for c in cols:
                w -= np.vdot(c, w) * c
        n = np.linalg.norm(w)
        if n > tol:
            cols.append(w / n)
    if not cols:
        return np.zeros((0, 0), dtype=complex)
    return np.stack(cols, axis=1)


def match_values(a: Sequence[float], b: Sequence[float], value_match_tol: float = VALUE_MATCH_TOL) -> list[tuple]:
    """Align two spectra.

    Returns a list of ``(x, i, j)`` with ``i`` indexing ``a`` and ``j``
    indexing ``b`` (either may be ``None`` when a value has no partner),
    ordered by value.  Matching is greedy nearest-value; a value with two
    candidates inside ``value_match_tol`` raises :class:`AmbiguousOutcome`.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    pairs: list[tuple] = []
    used_b: set[int] = set()
    for i, x in enumerate(a):
        cand = np.flatnonzero(np.abs(b - x) <= value_match_tol)
        if len(cand) > 1:
            raise AmbiguousOutcome(f"value {x!r} matches {len(cand)} outcomes within {value_match_tol:g}")
        if len(cand) == 1:
            j = int(cand[0])
            if j in used_b:
                raise AmbiguousOutcome(f"outcome {b[j]!r} matches several values within {value_match_tol:g}")
            used_b.add(j)
            pairs.append((float(x), i, j))
        else:
            pairs.append((float(x), i, None))
    for j, y in enumerate(b):
        if j not in used_b:
            pairs.append((float(y), None, j))
    pairs.sort(key=lambda t: t[0])
    return pairs


def random_hermitian(rng: np.random.Generator, dim: int, scale: float = 1.0) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * 0.5 * (g + dagger(g))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-random unitary via QR with the phase fix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    return normalize(rng.standard_normal(dim) + 1j * rng.standard_normal(dim))


def random_unit_in_span(rng: np.random.Generator, basis: np.ndarray) -> np.ndarray:
    """Unit vector with standard-normal complex coefficients over orthonormal ``basis`` columns."""
    k = basis.shape[1]
    c = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return normalize(basis @ c)


def conjugate(obs: Observable, u) -> Observable:
    """``U^dag X U``; the spectrum is unchanged and the projections are conjugated directly."""
    u = as_matrix(u)
    ud = dagger(u)
    spectral = SpectralDecomposition(obs.values.copy(), tuple(ud @ e @ u for e in obs.projections))
    return Observable(ud @ obs.matrix @ u, spectral)
