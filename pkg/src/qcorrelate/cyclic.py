"""Cyclic subspaces and the structural characterizations of perfectly correlating states."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import TOL, is_perfectly_correlated
from .errors import NotDecomposable
from .linalg import (
    TOL_NORM,
    VALUE_MATCH_TOL,
    as_state,
    check_dims,
    ensure_observable,
    match_values,
    max_abs,
    random_unit_in_span,
    subspace_intersection_projection,
)

SPHERE_SAMPLES = 32


@dataclass(frozen=True)
class CyclicSubspace:
    """Smallest ``X``-invariant subspace containing ``psi``.

    ``basis`` columns are orthonormal eigenvectors of ``X``; ``eigenvalues``
    gives the eigenvalue of each column.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    projection: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """Random unit vector in the subspace."""
        return random_unit_in_span(rng, self.basis)


def cyclic_subspace(X, psi, tol_norm: float = TOL_NORM) -> CyclicSubspace:
    """Cyclic subspace of ``X`` generated by ``psi``.

    In finite dimension it is spanned by the nonzero components ``E^X(x) psi``,
    which are already mutually orthogonal eigenvectors; each is normalized and
    components with norm at most ``tol_norm`` are dropped.
    """
    X = ensure_observable(X)
    psi = as_state(psi)
    check_dims(X, psi)
    cols, vals = [], []
    for x, e in X.spectral:
        v = e @ psi
        n = np.linalg.norm(v)
        if n > tol_norm:
            cols.append(v / n)
            vals.append(x)
    basis = np.stack(cols, axis=1)
    return CyclicSubspace(basis, np.array(vals), basis @ basis.conj().T)


@dataclass(frozen=True)
class Theorem2Report:
    """The five equivalent characterizations of perfect correlation, evaluated independently.

    ``cond_i``: perfectly correlated in ``psi``;
    ``cond_ii``: perfectly correlated in sampled unit vectors of the cyclic subspace;
    ``cond_iii``: ``E^X(x) psi == E^Y(x) psi`` for every ``x``;
    ``cond_iv``: ``E^X(x) P == E^Y(x) P`` for every ``x``;
    ``cond_v``: ``X P == Y P``.
    """

    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    cond_v: bool
    tol: float
    seed: int
    sphere_samples: int

    @property
    def conditions(self) -> tuple[bool, ...]:
        return (self.cond_i, self.cond_ii, self.cond_iii, self.cond_iv, self.cond_v)

    @property
    def consistent(self) -> bool:
        return len(set(self.conditions)) == 1

    def to_dict(self) -> dict:
        return {
            "cond_i": bool(self.cond_i),
            "cond_ii": bool(self.cond_ii),
            "cond_iii": bool(self.cond_iii),
            "cond_iv": bool(self.cond_iv),
            "cond_v": bool(self.cond_v),
            "tol": float(self.tol),
            "seed": int(self.seed),
            "sphere_samples": int(self.sphere_samples),
        }


def _matched_projections(X, Y, value_match_tol):
    """Yield ``(x, E^X(x), E^Y(x))`` over the union of both spectra (zero where absent)."""
    zero = np.zeros((X.dim, X.dim), dtype=complex)
    for x, i, j in match_values(X.values, Y.values, value_match_tol):
        ex = X.projections[i] if i is not None else zero
        ey = Y.projections[j] if j is not None else zero
        yield x, ex, ey


def theorem2_report(
    X,
    Y,
    psi,
    tol: float = TOL,
    sphere_samples: int = SPHERE_SAMPLES,
    seed: int = 0,
    value_match_tol: float = VALUE_MATCH_TOL,
) -> Theorem2Report:
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    cyc = cyclic_subspace(X, psi)
    P = cyc.projection

    cond_i = is_perfectly_correlated(X, Y, psi, tol, value_match_tol).perfectly_correlated

    rng = np.random.default_rng(seed)
    cond_ii = True
    for _ in range(sphere_samples):
        phi = cyc.sample(rng)
        if not is_perfectly_correlated(X, Y, phi, tol, value_match_tol).perfectly_correlated:
            cond_ii = False
            break

    # Indicator functions of single values span every f(X) in finite dimension.
    pairs = list(_matched_projections(X, Y, value_match_tol))
    cond_iii = all(np.linalg.norm(ex @ psi - ey @ psi) <= tol for _, ex, ey in pairs)
    cond_iv = all(max_abs(ex @ P - ey @ P) <= tol for _, ex, ey in pairs)
    cond_v = max_abs(X.matrix @ P - Y.matrix @ P) <= tol

    return Theorem2Report(
        bool(cond_i), bool(cond_ii), bool(cond_iii), bool(cond_iv), bool(cond_v),
        tol=tol, seed=seed, sphere_samples=sphere_samples,
    )


def common_eigenstate_decomposition(
    X, Y, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL
) -> dict[float, np.ndarray]:
    """Split ``psi`` into common eigenvectors of ``X`` and ``Y`` sharing an eigenvalue.

    Returns ``{x: Q(x) psi}`` for every shared eigenvalue ``x`` whose component
    is nonzero, where ``Q(x)`` projects onto ``ran E^X(x) & ran E^Y(x)``.

    Raises
    ------
    NotDecomposable
        If the components fail to reconstruct ``psi`` within ``tol``.
    """
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    parts: dict[float, np.ndarray] = {}
    for x, i, j in match_values(X.values, Y.values, value_match_tol):
        if i is None or j is None:
            continue
        q = subspace_intersection_projection(X.projections[i], Y.projections[j])
        v = q @ psi
        if np.linalg.norm(v) > 0:
            parts[x] = v
    total = sum(parts.values(), np.zeros_like(psi))
    residual = float(np.linalg.norm(total - psi))
    if residual > tol:
        raise NotDecomposable(f"common eigencomponents miss psi by {residual:.3e}")
    return parts


def equal_distribution_certificate(
    X, Y, psi, tol: float = TOL, tol_norm: float = TOL_NORM
) -> bool:
    """Finite certificate that ``X`` and ``Y`` are equally distributed on the cyclic sphere.

    Takes the eigenbasis of ``X`` restricted to the cyclic subspace and checks
    ``Y v == x v`` for each basis vector ``v`` with ``X v == x v``.
    """
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    cyc = cyclic_subspace(X, psi, tol_norm)
    for k in range(cyc.dim):
        v = cyc.basis[:, k]
        if np.linalg.norm(Y.matrix @ v - cyc.eigenvalues[k] * v) > tol:
            return False
    return True
