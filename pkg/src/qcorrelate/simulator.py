"""Monte-Carlo sampling of consecutive projective measurements and of indirect measurements.

Random numbers come from numpy's PCG64 bit generator seeded with
``np.random.default_rng(seed)``.  Every measurement consumes exactly one
uniform variate from ``Generator.random``, drawn in shot order (for
consecutive measurements: first-outcome variate, then second-outcome
variate, then the next shot).  An outcome is chosen by inverse CDF over the
outcomes sorted by increasing value.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, ZeroShots
from .linalg import as_state, check_dims, ensure_observable
from .measurement import MeasuringProcess, output_distribution

DEFAULT_SEED = 7

# Probabilities at or below this are roundoff from an exact zero (e.g. after a
# collapse onto an eigenspace orthogonal to every other one) and are not sampled.
PROB_FLOOR = 1e-12


@dataclass
class SampleReport:
    """Empirical versus theoretical outcome frequencies.

    Keys are outcome values ``x`` for single measurements and ``(x, y)`` tuples
    for consecutive ones.  ``unexpected`` lists empirical keys absent from
    the theoretical support.
    """

    shots: int
    seed: int
    counts: dict
    empirical: dict
    theoretical: dict
    max_abs_deviation: float
    total_variation: float
    unexpected: list = field(default_factory=list)

    def off_diagonal_counts(self, value_match_tol: float = 1e-8) -> int:
        """Counts of pair outcomes with ``x != y``; zero for single-outcome reports."""
        return sum(
            c for k, c in self.counts.items()
            if isinstance(k, tuple) and abs(k[0] - k[1]) > value_match_tol
        )

    def to_dict(self) -> dict:
        def rows(d):
            out = []
            for k, v in sorted(d.items()):
                key = {"x": k[0], "y": k[1]} if isinstance(k, tuple) else {"x": k}
                out.append({**key, "value": v})
            return out

        return {
            "shots": self.shots,
            "seed": self.seed,
            "counts": rows(self.counts),
            "empirical": rows(self.empirical),
            "theoretical": rows(self.theoretical),
            "max_abs_deviation": self.max_abs_deviation,
            "total_variation": self.total_variation,
            "unexpected": [list(k) if isinstance(k, tuple) else k for k in self.unexpected],
        }


def _inverse_cdf(probs: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Index of the outcome selected by each uniform ``u`` in ``[0, 1)``."""
    p = np.where(probs > PROB_FLOOR, probs, 0.0)
    cdf = np.cumsum(p)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    # Guard against u landing above the last cdf entry after rounding.
    last = np.flatnonzero(p)[-1]
    return np.minimum(idx, last)


def _report(keys, probs, chosen, shots, seed) -> SampleReport:
    n = np.bincount(chosen, minlength=len(keys))
    counts = {k: int(c) for k, c in zip(keys, n) if c}
    empirical = {k: c / shots for k, c in counts.items()}
    theoretical = {k: float(p) for k, p in zip(keys, probs) if p > PROB_FLOOR}
    support = set(empirical) | set(theoretical)
    dev = np.array([empirical.get(k, 0.0) - theoretical.get(k, 0.0) for k in support])
    return SampleReport(
        shots=shots,
        seed=seed,
        counts=counts,
        empirical=empirical,
        theoretical=theoretical,
        max_abs_deviation=float(np.max(np.abs(dev), initial=0.0)),
        total_variation=float(0.5 * np.sum(np.abs(dev))),
        unexpected=sorted(k for k in empirical if k not in theoretical),
    )


def _check_shots(shots: int):
    if shots < 1:
        raise ZeroShots(f"shots must be positive, got {shots}")


def simulate_consecutive(X, Y, psi, shots: int, seed: int = DEFAULT_SEED) -> SampleReport:
    """Measure ``X`` then ``Y`` projectively, with Lueders collapse after the first measurement.

    The theoretical reference is ``||E^Y(y) E^X(x) psi||^2``.
    """
    _check_shots(shots)
    X, Y = ensure_observable(X), ensure_observable(Y)
    psi = as_state(psi)
    check_dims(X, Y, psi)

    nx, ny = len(X.values), len(Y.values)
    joint = np.zeros((nx, ny))
    px = np.zeros(nx)
    for i, ex in enumerate(X.projections):
        v = ex @ psi
        px[i] = np.vdot(v, v).real
        for j, ey in enumerate(Y.projections):
            w = ey @ v
            joint[i, j] = np.vdot(w, w).real

    u = np.random.default_rng(seed).random(2 * shots).reshape(shots, 2)
    first = _inverse_cdf(px, u[:, 0])
    second = np.empty(shots, dtype=int)
    for i in np.unique(first):
        rows = first == i
        # Conditional law of the second outcome given the collapsed state.
        second[rows] = _inverse_cdf(joint[i] / px[i], u[rows, 1])

    keys = [(float(x), float(y)) for x in X.values for y in Y.values]
    return _report(keys, joint.reshape(-1), first * ny + second, shots, seed)


def simulate_indirect(p: MeasuringProcess, psi, shots: int, seed: int = DEFAULT_SEED) -> SampleReport:
    """Sample meter readings in the evolved state ``U (psi (x) xi)``; reference is the POVM distribution."""
    _check_shots(shots)
    psi = as_state(psi)
    if psi.shape[0] != p.dim_h:
        raise DimensionMismatch(f"state has dimension {psi.shape[0]}, system has {p.dim_h}")
    evolved = p.evolve(psi)
    eye = np.eye(p.dim_h)
    probs = np.array([np.vdot(evolved, np.kron(eye, e) @ evolved).real for e in p.meter.projections])

    u = np.random.default_rng(seed).random(shots)
    chosen = _inverse_cdf(probs, u)
    keys = [float(x) for x in p.meter.values]
    theory = output_distribution(p, psi)
    return _report(keys, np.array([theory[k] for k in keys]), chosen, shots, seed)
