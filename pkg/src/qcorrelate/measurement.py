"""Indirect measuring processes, their POVMs, and precise-measurement checks.

Composite spaces are ordered system first: ``H (x) K``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .correlation import TOL, is_perfectly_correlated
from .cyclic import SPHERE_SAMPLES, cyclic_subspace
from .errors import DimensionMismatch, NotUnitary, NumericalInconsistency
from .linalg import (
    TOL_OP,
    TOL_PSD,
    VALUE_MATCH_TOL,
    Observable,
    SpectralDecomposition,
    as_matrix,
    as_state,
    check_dims,
    conjugate,
    dagger,
    ensure_observable,
    expectation,
    is_unitary,
    match_values,
    max_abs,
    outer,
    partial_trace_second,
    tensor,
)


@dataclass(frozen=True)
class MeasuringProcess:
    """Probe state ``xi``, interaction unitary ``unitary`` on ``H (x) K`` and meter ``meter`` on ``K``."""

    dim_h: int
    dim_k: int
    xi: np.ndarray
    unitary: np.ndarray
    meter: Observable

    def __post_init__(self):
        n = self.dim_h * self.dim_k
        if self.unitary.shape != (n, n):
            raise DimensionMismatch(f"unitary has shape {self.unitary.shape}, expected {(n, n)}")
        if self.xi.shape != (self.dim_k,) or self.meter.dim != self.dim_k:
            raise DimensionMismatch("probe state and meter must live on the probe space")
        if not is_unitary(self.unitary):
            raise NotUnitary("interaction operator is not unitary")

    @classmethod
    def create(cls, dim_h: int, dim_k: int, xi, unitary, meter) -> "MeasuringProcess":
        """Validate and coerce raw arrays into a process."""
        return cls(int(dim_h), int(dim_k), as_state(xi), as_matrix(unitary), ensure_observable(meter))

    @property
    def dim(self) -> int:
        return self.dim_h * self.dim_k

    def evolve(self, psi) -> np.ndarray:
        """``U (psi (x) xi)``."""
        return self.unitary @ tensor(psi, self.xi)

    def meter_effect(self, e: np.ndarray) -> np.ndarray:
        """Heisenberg-evolved meter projection ``U^dag (I (x) e) U``."""
        return dagger(self.unitary) @ tensor(np.eye(self.dim_h), e) @ self.unitary


@dataclass(frozen=True)
class Povm:
    """Outcome values with one positive effect each, summing to the identity."""

    outcomes: np.ndarray
    effects: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def effect(self, x: float, value_match_tol: float = VALUE_MATCH_TOL) -> np.ndarray:
        idx = np.flatnonzero(np.abs(self.outcomes - x) <= value_match_tol)
        if len(idx) == 0:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.effects[idx[0]]

    def min_eigenvalue(self) -> float:
        return min(float(np.linalg.eigvalsh(0.5 * (e + dagger(e)))[0]) for e in self.effects)

    def completeness_error(self) -> float:
        return max_abs(sum(self.effects) - np.eye(self.dim))

    def is_valid(self, tol_psd: float = TOL_PSD, tol_op: float = TOL_OP) -> bool:
        return self.min_eigenvalue() >= -tol_psd and self.completeness_error() <= tol_op

    def fingerprint(self) -> list[float]:
        """Operator 2-norm of each effect, in outcome order."""
        return [float(np.linalg.norm(e, 2)) for e in self.effects]


def heisenberg_meter(p: MeasuringProcess) -> Observable:
    """Meter after the interaction, ``U^dag (I (x) M) U``, as an observable on ``H (x) K``."""
    eye = np.eye(p.dim_h)
    spectral = SpectralDecomposition(p.meter.values.copy(), tuple(tensor(eye, e) for e in p.meter.projections))
    return conjugate(Observable(tensor(eye, p.meter.matrix), spectral), p.unitary)


def povm_of(p: MeasuringProcess) -> Povm:
    """``Pi(x) = Tr_K[U^dag (I (x) E^M(x)) U (I (x) |xi><xi|)]`` for each meter value."""
    probe = tensor(np.eye(p.dim_h), outer(p.xi))
    effects = tuple(
        partial_trace_second(p.meter_effect(e) @ probe, p.dim_h, p.dim_k)
        for e in p.meter.projections
    )
    return Povm(p.meter.values.copy(), effects)


def output_distribution(p: MeasuringProcess, psi, op_tol: float = TOL_OP) -> dict[float, float]:
    """Probability of each meter outcome for input ``psi``.

    Computed both on the composite space and through the POVM; the two must
    agree within ``op_tol``.
    """
    psi = as_state(psi)
    if psi.shape[0] != p.dim_h:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, system has {p.dim_h}")
    joint = tensor(psi, p.xi)
    povm = povm_of(p)
    out: dict[float, float] = {}
    for x, e, pi in zip(p.meter.values, p.meter.projections, povm.effects):
        full = expectation(p.meter_effect(e), joint)
        reduced = expectation(pi, psi)
        if abs(full - reduced) > op_tol:
            raise NumericalInconsistency(f"outcome {x!r}: composite {full!r} vs POVM {reduced!r}")
        out[float(x)] = float(full.real)
    return out


def satisfies_bsf(
    p: MeasuringProcess, A, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL
) -> bool:
    """Output distribution equals ``<psi|E^A(x)|psi>`` for every ``x``; missing outcomes count as 0."""
    A = ensure_observable(A)
    dist = output_distribution(p, psi)
    px = A.distribution(psi)
    outcomes = list(dist)
    for _, i, j in match_values(A.values, outcomes, value_match_tol):
        a = px[i] if i is not None else 0.0
        b = dist[outcomes[j]] if j is not None else 0.0
        if abs(a - b) > tol:
            return False
    return True


def povm_perfectly_correlated(
    povm: Povm, A, psi, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL
) -> bool:
    """``<psi|Pi(x) E^A(y)|psi>`` vanishes within ``tol`` whenever ``x != y``."""
    A = ensure_observable(A)
    psi = as_state(psi)
    check_dims(A, psi, povm.effects[0])
    for x, pi in zip(povm.outcomes, povm.effects):
        for y, e in A.spectral:
            if abs(x - y) > value_match_tol and abs(expectation(pi @ e, psi)) > tol:
                return False
    return True


def _aligned_effects(povm: Povm, A: Observable, value_match_tol: float):
    """Yield ``(x, Pi(x), E^A(x))`` over the union of outcomes, zero where absent."""
    zero = np.zeros((A.dim, A.dim), dtype=complex)
    for x, i, j in match_values(povm.outcomes, A.values, value_match_tol):
        pi = povm.effects[i] if i is not None else zero
        e = A.projections[j] if j is not None else zero
        yield x, pi, e


@dataclass(frozen=True)
class PreciseMeasurementReport:
    """Equivalent characterizations of a precise measurement of ``A`` in ``psi``.

    ``cond_i``: ``A (x) I`` and the evolved meter are perfectly correlated in ``psi (x) xi``;
    ``cond_ii``: the POVM is perfectly correlated to ``A`` in ``psi``;
    ``cond_iii``: the Born statistical formula holds on the cyclic sphere of ``(A, psi)``;
    ``cond_iv``: ``Pi(x) P == E^A(x) P`` for every ``x``.
    """

    cond_i: bool
    cond_ii: bool
    cond_iii: bool
    cond_iv: bool
    effect_norms: list[float]

    @property
    def conditions(self) -> tuple[bool, ...]:
        return (self.cond_i, self.cond_ii, self.cond_iii, self.cond_iv)

    @property
    def consistent(self) -> bool:
        return len(set(self.conditions)) == 1

    def to_dict(self) -> dict:
        return {
            "cond_i": bool(self.cond_i),
            "cond_ii": bool(self.cond_ii),
            "cond_iii": bool(self.cond_iii),
            "cond_iv": bool(self.cond_iv),
            "povm_fingerprint": [float(v) for v in self.effect_norms],
        }


def precise_measurement_report(
    p: MeasuringProcess,
    A,
    psi,
    tol: float = TOL,
    samples: int = SPHERE_SAMPLES,
    seed: int = 0,
    value_match_tol: float = VALUE_MATCH_TOL,
) -> PreciseMeasurementReport:
    """Evaluate the four characterizations independently.

    The Born-formula condition quantifies over a continuum of states; it is
    decided exactly on the eigenbasis of ``A`` inside the cyclic subspace and
    cross-checked on ``samples`` seeded random unit vectors of that subspace.
    """
    A = ensure_observable(A)
    psi = as_state(psi)
    check_dims(A, psi)
    if A.dim != p.dim_h:
        raise DimensionMismatch(f"observable has dimension {A.dim}, system has {p.dim_h}")
    povm = povm_of(p)

    cond_i = is_perfectly_correlated(
        lift(A, p.dim_k), heisenberg_meter(p), tensor(psi, p.xi), tol, value_match_tol
    ).perfectly_correlated

    cond_ii = povm_perfectly_correlated(povm, A, psi, tol, value_match_tol)

    cyc = cyclic_subspace(A, psi)
    rng = np.random.default_rng(seed)
    states = [cyc.basis[:, k] for k in range(cyc.dim)]
    states += [cyc.sample(rng) for _ in range(samples)]
    cond_iii = all(satisfies_bsf(p, A, phi, tol, value_match_tol) for phi in states)

    P = cyc.projection
    cond_iv = all(max_abs(pi @ P - e @ P) <= tol for _, pi, e in _aligned_effects(povm, A, value_match_tol))

    return PreciseMeasurementReport(bool(cond_i), bool(cond_ii), bool(cond_iii), bool(cond_iv), povm.fingerprint())


def _lift_spectral(A: Observable, dim_k: int):
    """Spectral decomposition of ``A (x) I`` from that of ``A``, with no second eigensolve."""
    eye = np.eye(dim_k)
    return SpectralDecomposition(A.values.copy(), tuple(tensor(e, eye) for e in A.projections))


def lift(A, dim_k: int) -> Observable:
    """``A (x) I_K`` as an observable on the composite space."""
    A = ensure_observable(A)
    return Observable(tensor(A.matrix, np.eye(dim_k)), _lift_spectral(A, dim_k))


def is_precise_for_all_states(
    p: MeasuringProcess, A, tol: float = TOL, value_match_tol: float = VALUE_MATCH_TOL
) -> bool:
    """``Pi(x) == E^A(x)`` for every outcome; an unmatched outcome needs a vanishing effect."""
    A = ensure_observable(A)
    if A.dim != p.dim_h:
        raise DimensionMismatch(f"observable has dimension {A.dim}, system has {p.dim_h}")
    povm = povm_of(p)
    return all(max_abs(pi - e) <= tol for _, pi, e in _aligned_effects(povm, A, value_match_tol))
