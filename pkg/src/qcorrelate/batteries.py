"""Seeded random instance families used by the property and acceptance tests.

Each family is built so its expected verdict is far from any tolerance
boundary: perfectly correlated instances are exact by construction, the
others miss by O(1).  Eigenvalues are drawn from small integers so that
degeneracies and shared values across the two spectra are common.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import dagger, normalize, random_hermitian, random_state, random_unitary, tensor
from .measurement import MeasuringProcess
from .models import build_von_neumann

VALUES = np.arange(-2, 3)


@dataclass
class PairInstance:
    family: str
    X: np.ndarray
    Y: np.ndarray
    psi: np.ndarray


@dataclass
class ProcessInstance:
    family: str
    process: MeasuringProcess
    A: np.ndarray
    psi: np.ndarray


def _diag_in(v: np.ndarray, values) -> np.ndarray:
    return v @ np.diag(values) @ dagger(v)


def _perfect(rng, d):
    """X and Y share k eigenvectors with equal eigenvalues; psi lives in their span."""
    v = random_unitary(rng, d)
    k = int(rng.integers(1, d + 1))
    common = rng.choice(VALUES, size=k)
    x = _diag_in(v, np.concatenate([common, rng.choice(VALUES, size=d - k)]))
    rest = v[:, k:]
    y = _diag_in(v[:, :k], common) + rest @ random_hermitian(rng, d - k) @ dagger(rest)
    psi = normalize(v[:, :k] @ (rng.standard_normal(k) + 1j * rng.standard_normal(k)))
    return x, y, psi


def _same_action(rng, d):
    """Y = X + D with D psi = 0, so X psi = Y psi; generically not jointly distributed."""
    x = _diag_in(random_unitary(rng, d), rng.choice(VALUES, size=d))
    psi = random_state(rng, d)
    q = np.eye(d) - np.outer(psi, psi.conj())
    return x, x + q @ random_hermitian(rng, d) @ q, psi


def _commuting(rng, d):
    """Diagonal in one basis with independently drawn values; psi generic."""
    v = random_unitary(rng, d)
    xv = rng.choice(VALUES, size=d)
    yv = xv.copy()
    while np.array_equal(yv, xv):
        yv = rng.choice(VALUES, size=d)
    return _diag_in(v, xv), _diag_in(v, yv), random_state(rng, d)


def _generic(rng, d):
    return random_hermitian(rng, d), random_hermitian(rng, d), random_state(rng, d)


def _identical(rng, d):
    x = _diag_in(random_unitary(rng, d), rng.choice(VALUES, size=d))
    return x, x.copy(), random_state(rng, d)


PAIR_FAMILIES = {
    "perfect": _perfect,
    "same_action": _same_action,
    "commuting": _commuting,
    "generic": _generic,
    "identical": _identical,
}


def pair_battery(n: int = 500, seed: int = 2024, dims=(2, 6)) -> list[PairInstance]:
    """``n`` pair instances cycling through the families, dimensions uniform in ``dims``."""
    rng = np.random.default_rng(seed)
    names = list(PAIR_FAMILIES)
    out = []
    for k in range(n):
        fam = names[k % len(names)]
        d = int(rng.integers(dims[0], dims[1] + 1))
        x, y, psi = PAIR_FAMILIES[fam](rng, d)
        out.append(PairInstance(fam, 0.5 * (x + dagger(x)), 0.5 * (y + dagger(y)), psi))
    return out


def random_nondegenerate(rng, d) -> np.ndarray:
    vals = np.sort(rng.choice(np.arange(-d, d + 1), size=d, replace=False)).astype(float)
    return _diag_in(random_unitary(rng, d), vals)


def _vn(rng, d):
    a = _diag_in(random_unitary(rng, d), rng.choice(VALUES, size=d))
    model = build_von_neumann(a, xi_index=int(rng.integers(d)))
    return model.process, a, random_state(rng, d)


def _identity_u(rng, d):
    dk = int(rng.integers(2, 5))
    meter = _diag_in(random_unitary(rng, dk), rng.choice(VALUES, size=dk))
    p = MeasuringProcess.create(d, dk, random_state(rng, dk), np.eye(d * dk), meter)
    return p, random_nondegenerate(rng, d), random_state(rng, d)


def _perturbed(rng, d):
    """von Neumann interaction followed by a random unitary kick of strength 0.2 to 1."""
    a = random_nondegenerate(rng, d)
    model = build_von_neumann(a)
    h = random_hermitian(rng, d * d)
    w, v = np.linalg.eigh(h)
    eps = rng.uniform(0.2, 1.0)
    kick = v @ np.diag(np.exp(1j * eps * w)) @ dagger(v)
    p = model.process
    return MeasuringProcess.create(d, d, p.xi, kick @ p.unitary, p.meter), a, random_state(rng, d)


def _partial(rng, d):
    """Precise on the span of some eigenvectors of A only; psi drawn from that span.

    The interaction is the von Neumann one composed with a unitary scrambling
    ``span{phi_n : n not in S} (x) K`` and fixing ``span{phi_n : n in S} (x) K``.
    """
    a = random_nondegenerate(rng, d)
    model = build_von_neumann(a)
    phi = model.eigenbasis
    s = int(rng.integers(1, d))
    inside, outside = phi[:, :s], phi[:, s:]
    scramble = random_unitary(rng, (d - s) * d)
    # Embed the scramble on (outside (x) K) and act as identity on (inside (x) K).
    emb = tensor(outside, np.eye(d))
    w = tensor(inside @ dagger(inside), np.eye(d)) + emb @ scramble @ dagger(emb)
    p = model.process
    psi = normalize(inside @ (rng.standard_normal(s) + 1j * rng.standard_normal(s)))
    return MeasuringProcess.create(d, d, p.xi, p.unitary @ w, p.meter), a, psi


def _constant(rng, d):
    """A = c I with a probe whose meter reading is c with certainty."""
    c = float(rng.choice(VALUES))
    dk = int(rng.integers(2, 5))
    meter_vals = np.concatenate([[c], rng.choice(VALUES[VALUES != c], size=dk - 1)])
    meter = np.diag(meter_vals).astype(complex)
    xi = np.zeros(dk, dtype=complex)
    xi[0] = 1
    p = MeasuringProcess.create(d, dk, xi, tensor(random_unitary(rng, d), np.eye(dk)), meter)
    return p, c * np.eye(d), random_state(rng, d)


PROCESS_FAMILIES = {
    "von_neumann": _vn,
    "identity_u": _identity_u,
    "perturbed": _perturbed,
    "partial": _partial,
    "constant": _constant,
}


def process_battery(n: int = 250, seed: int = 2025, dims=(2, 4)) -> list[ProcessInstance]:
    rng = np.random.default_rng(seed)
    names = list(PROCESS_FAMILIES)
    out = []
    for k in range(n):
        fam = names[k % len(names)]
        d = int(rng.integers(dims[0], dims[1] + 1))
        p, a, psi = PROCESS_FAMILIES[fam](rng, d)
        out.append(ProcessInstance(fam, p, 0.5 * (a + dagger(a)), psi))
    return out
