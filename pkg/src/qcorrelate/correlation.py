"""Joint distributivity, perfect correlation and equal distribution of two observables in a state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalInconsistency
from .linalg import (
    TOL_OP,
    VALUE_MATCH_TOL,
    as_state,
    check_dims,
    ensure_observable,
    expectation,
    match_values,
)

TOL = 1e-9


@dataclass(frozen=True)
class JointTermTable:
    """``terms[i, j] = <psi|E^X(x_i) E^Y(y_j)|psi>`` for every pair of eigenvalues."""

    x_values: np.ndarray
    y_values: np.ndarray
    terms: np.ndarray

    def term(self, x: float, y: float, value_match_tol: float = VALUE_MATCH_TOL) -> complex:
        i = np.flatnonzero(np.abs(self.x_values - x) <= value_match_tol)
        j = np.flatnonzero(np.abs(self.y_values - y) <= value_match_tol)
        if len(i) == 0 or len(j) == 0:
            return 0j
        return complex(self.terms[i[0], j[0]])

    def mismatch_mask(self, value_match_tol: float = VALUE_MATCH_TOL) -> np.ndarray:
        """True where ``x != y`` beyond ``value_match_tol``."""
        return np.abs(self.x_values[:, None] - self.y_values[None, :]) > value_match_tol

    def x_marginal(self) -> np.ndarray:
        return self.terms.sum(axis=1)

    def y_marginal(self) -> np.ndarray:
        return self.terms.sum(axis=0)


@dataclass(frozen=True)
class CorrelationVerdict:
    jointly_distributed: bool
    perfectly_correlated: bool
    equally_distributed: bool
    rms_difference: float
    worst_violation: tuple[float, float, complex] | None
    kronecker_form: bool

    def to_dict(self) -> dict:
        wv = None
        if self.worst_violation is not None:
            x, y, t = self.worst_violation
            wv = {"x": float(x), "y": float(y), "term": [float(t.real), float(t.imag)]}
        return {
            "jointly_distributed": bool(self.jointly_distributed),
            "perfectly_correlated": bool(self.perfectly_correlated),
            "equally_distributed": bool(self.equally_distributed),
            "rms_difference": float(self.rms_difference),
            "worst_violation": wv,
            "kronecker_form": bool(self.kronecker_form),
        }


def joint_term_table(X, Y, psi) -> JointTermTable:
    """All sandwiched projector products; no thresholding is applied."""
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    terms = np.empty((len(X.values), len(Y.values)), dtype=complex)
    for i, ex in enumerate(X.projections):
        for j, ey in enumerate(Y.projections):
            terms[i, j] = expectation(ex @ ey, psi)
    return JointTermTable(X.values.copy(), Y.values.copy(), terms)


def is_jointly_distributed(table: JointTermTable, tol: float = TOL) -> bool:
    """Every term is a non-negative real within ``tol``."""
    t = table.terms
    ok = bool(np.all(t.real >= -tol) and np.all(np.abs(t.imag) <= tol))
    if ok:
        # <E^Y E^X> is the conjugate of <E^X E^Y>; the two orderings must agree.
        if np.max(np.abs(t - np.conj(t)), initial=0.0) > 2 * tol:
            raise NumericalInconsistency("ordering symmetry of joint terms violated")
    return ok


def equally_distributed(X, Y, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL) -> bool:
    """``<psi|E^X(x)|psi> == <psi|E^Y(x)|psi>`` for every real ``x``."""
    X, Y = ensure_observable(X), ensure_observable(Y)
    px, py = X.distribution(psi), Y.distribution(psi)
    for _, i, j in match_values(X.values, Y.values, value_match_tol):
        a = px[i] if i is not None else 0.0
        b = py[j] if j is not None else 0.0
        if abs(a - b) > tol:
            return False
    return True


def rms_difference(X, Y, psi, op_tol: float = TOL_OP) -> float:
    """``||X psi - Y psi||``, cross-checked against the weighted sum of joint terms."""
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    direct = float(np.linalg.norm(X.matrix @ psi - Y.matrix @ psi))
    table = joint_term_table(X, Y, psi)
    weights = (table.x_values[:, None] - table.y_values[None, :]) ** 2
    via_terms = float(np.sum(weights * table.terms.real))
    scale = max(1.0, float(np.max(weights, initial=0.0)))
    if abs(direct**2 - via_terms) > op_tol * scale:
        raise NumericalInconsistency(
            f"||X psi - Y psi||^2 = {direct**2!r} but weighted joint terms sum to {via_terms!r}"
        )
    return direct


def is_perfectly_correlated(
    X, Y, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL
) -> CorrelationVerdict:
    """Decide perfect correlation of ``X`` and ``Y`` in ``psi``.

    ``perfectly_correlated`` holds when every term with ``|x - y| > value_match_tol``
    has modulus at most ``tol``.  The verdict also records joint
    distributivity, equal distribution, the RMS difference, the largest
    off-diagonal term and whether the Kronecker form
    ``term(x, y) = delta(x, y) <psi|E^X(x)|psi>`` holds.
    """
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)
    table = joint_term_table(X, Y, psi)
    mask = table.mismatch_mask(value_match_tol)
    off = np.where(mask, np.abs(table.terms), -1.0)

    worst = None
    if mask.any():
        i, j = np.unravel_index(np.argmax(off), off.shape)
        worst = (float(table.x_values[i]), float(table.y_values[j]), complex(table.terms[i, j]))
    perfect = bool(np.all(off <= tol))

    px = X.distribution(psi)
    kron = np.where(mask, 0.0, px[:, None])
    kronecker = bool(np.max(np.abs(table.terms - kron)) <= tol)

    return CorrelationVerdict(
        jointly_distributed=is_jointly_distributed(table, tol),
        perfectly_correlated=perfect,
        equally_distributed=equally_distributed(X, Y, psi, tol, value_match_tol),
        rms_difference=rms_difference(X, Y, psi),
        worst_violation=worst,
        kronecker_form=kronecker,
    )


def check_theorem1(X, Y, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL) -> bool:
    """Perfect correlation iff (jointly distributed and ``X psi == Y psi``), on this instance."""
    v = is_perfectly_correlated(X, Y, psi, tol, value_match_tol)
    return v.perfectly_correlated == (v.jointly_distributed and v.rms_difference <= tol)
