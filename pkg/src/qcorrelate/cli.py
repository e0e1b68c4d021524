"""Command-line front end.

Exit codes: 0 when the checked property holds, 1 when it does not, 2 on a
usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .correlation import TOL, check_theorem1, is_perfectly_correlated
from .cyclic import SPHERE_SAMPLES, common_eigenstate_decomposition, equal_distribution_certificate, theorem2_report
from .errors import NotDecomposable, QCorrelateError, SchemaError
from .io import SCHEMA_VERSION, Instance, fixture_path, load_instance
from .linalg import VALUE_MATCH_TOL, Observable
from .measurement import is_precise_for_all_states, povm_of, precise_measurement_report
from .models import build_von_neumann, ozawa_counterexample, product_state_example, verify_von_neumann
from .simulator import DEFAULT_SEED, simulate_consecutive, simulate_indirect

DEFAULT_SHOTS = 100_000
DEFAULT_GATE = 0.01
EXPECTED_MOMENTS = {"X": (1.0, 2.0, 4.0), "Y": (1.0, 2.0, 3.0)}


class UsageError(QCorrelateError):
    pass


def _resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    try:
        return fixture_path(path)
    except KeyError:
        raise SchemaError(f"no such instance file: {path}") from None


def _options(args, inst: Instance | None) -> dict:
    """Command-line flags override instance options, which override module defaults."""
    opts = {
        "tol": TOL,
        "value_match_tol": VALUE_MATCH_TOL,
        "seed": DEFAULT_SEED,
        "shots": DEFAULT_SHOTS,
        "samples": SPHERE_SAMPLES,
        "gate": DEFAULT_GATE,
    }
    if inst is not None:
        opts.update(inst.options)
    for key in opts:
        val = getattr(args, key, None)
        if val is not None:
            opts[key] = val
    return opts


def _emit(report: dict, fmt: str, lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _flag(b: bool) -> str:
    return "yes" if b else "no"


def cmd_correlate(args) -> int:
    inst = load_instance(_resolve(args.instance))
    if inst.kind not in ("pair", "fixture"):
        raise UsageError(f"correlate needs a pair or fixture instance, got {inst.kind!r}")
    o = _options(args, inst)
    X, Y = Observable.from_matrix(inst.X), Observable.from_matrix(inst.Y)
    verdict = is_perfectly_correlated(X, Y, inst.psi, o["tol"], o["value_match_tol"])
    t2 = theorem2_report(X, Y, inst.psi, o["tol"], o["samples"], o["seed"], o["value_match_tol"])
    try:
        parts = common_eigenstate_decomposition(X, Y, inst.psi, o["tol"], o["value_match_tol"])
        decomposable = True
    except NotDecomposable:
        parts, decomposable = {}, False
    certificate = equal_distribution_certificate(X, Y, inst.psi, o["tol"])
    theorem1 = check_theorem1(X, Y, inst.psi, o["tol"], o["value_match_tol"])

    ok = verdict.perfectly_correlated
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "correlate",
        "instance": inst.name,
        "ok": ok,
        "verdict": verdict.to_dict(),
        "theorem2": t2.to_dict(),
        "common_eigenstates": {
            "decomposable": decomposable,
            "weights": {repr(float(x)): float(np.vdot(v, v).real) for x, v in parts.items()},
        },
        "equal_distribution_certificate": certificate,
        "theorem1_consistent": theorem1,
    }
    d = verdict.to_dict()
    lines = [
        f"instance: {inst.name or args.instance}",
        f"perfectly correlated : {_flag(d['perfectly_correlated'])}",
        f"jointly distributed  : {_flag(d['jointly_distributed'])}",
        f"equally distributed  : {_flag(d['equally_distributed'])}",
        f"rms difference       : {d['rms_difference']:.3e}",
    ]
    if d["worst_violation"]:
        w = d["worst_violation"]
        lines.append(f"largest cross term   : x={w['x']:.6g} y={w['y']:.6g} term={w['term'][0]:+.3e}{w['term'][1]:+.3e}j")
    lines.append("cyclic-subspace conditions: " + " ".join(
        f"{k}={_flag(v)}" for k, v in t2.to_dict().items() if k.startswith("cond")
    ))
    lines.append(f"common eigenstate decomposition: {_flag(decomposable)}")
    lines.append(f"equal-distribution certificate : {_flag(certificate)}")
    _emit(report, args.format, lines)
    return 0 if ok else 1


def cmd_measure_check(args) -> int:
    inst = load_instance(_resolve(args.instance))
    if inst.kind != "process" or inst.A is None or inst.psi is None:
        raise UsageError("measure-check needs a process instance with a target observable A and a state psi")
    o = _options(args, inst)
    A = Observable.from_matrix(inst.A)
    rep = precise_measurement_report(inst.process, A, inst.psi, o["tol"], o["samples"], o["seed"], o["value_match_tol"])
    every_state = is_precise_for_all_states(inst.process, A, o["tol"], o["value_match_tol"])
    ok = all(rep.conditions)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "measure-check",
        "instance": inst.name,
        "ok": ok,
        "report": rep.to_dict(),
        "precise_for_all_states": every_state,
    }
    lines = [
        f"instance: {inst.name or args.instance}",
        "precise-measurement conditions: " + " ".join(
            f"{k}={_flag(v)}" for k, v in rep.to_dict().items() if k.startswith("cond")
        ),
        f"POVM effect norms: {', '.join(f'{v:.6g}' for v in rep.effect_norms)}",
        f"precise in every state: {_flag(every_state)}",
    ]
    _emit(report, args.format, lines)
    return 0 if ok else 1


def _close(a, b, tol) -> bool:
    return bool(np.all(np.abs(np.asarray(a) - np.asarray(b)) <= tol))


def cmd_paper_examples(args) -> int:
    o = _options(args, None)
    tol = o["tol"]
    checks: dict[str, bool] = {}

    oz = ozawa_counterexample()
    v = is_perfectly_correlated(oz.X, oz.Y, oz.psi, tol)
    t2 = theorem2_report(oz.X, oz.Y, oz.psi, tol, o["samples"], o["seed"])
    checks["moments A(t1) = (1, 2, 4)"] = _close(oz.moments["X"], EXPECTED_MOMENTS["X"], tol)
    checks["moments A(t2) = (1, 2, 3)"] = _close(oz.moments["Y"], EXPECTED_MOMENTS["Y"], tol)
    checks["A(t1) psi = A(t2) psi"] = v.rms_difference <= tol
    checks["A(t1) != A(t2) as operators"] = oz.checks["changed_as_operator"]
    checks["pair not jointly distributed"] = not v.jointly_distributed
    checks["pair not perfectly correlated"] = not v.perfectly_correlated
    checks["cyclic-subspace conditions all false"] = not any(t2.conditions)

    sz = np.diag([1.0, -1.0])
    plus = np.array([1.0, 1.0]) / np.sqrt(2)
    ps = product_state_example(sz, plus, tol)
    checks["product state: equally distributed"] = ps.checks["equally_distributed"]
    checks["product state: statistically independent"] = ps.checks["statistically_independent"]
    checks["product state: not perfectly correlated"] = not ps.checks["perfectly_correlated"]
    eig = product_state_example(sz, np.array([1.0, 0.0]), tol)
    checks["product state, eigenstate: perfectly correlated"] = eig.checks["perfectly_correlated"] and eig.checks["rms_zero"]

    model = build_von_neumann(sz)
    vn = verify_von_neumann(model, psi_samples=100, seed=o["seed"], tol=tol)
    checks["von Neumann: identity on H (x) span{xi}"] = vn.invariant_subspace_identity
    checks["von Neumann: value reproducing"] = vn.value_reproducing
    checks["von Neumann: repeatability"] = vn.repeatability
    checks["von Neumann: POVM equals spectral measure"] = is_precise_for_all_states(model.process, sz, tol)

    ok = all(checks.values())
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "paper-examples",
        "instance": None,
        "ok": ok,
        "moments": {k: list(m) for k, m in oz.moments.items()},
        "counterexample_verdict": v.to_dict(),
        "theorem2": t2.to_dict(),
        "product_state": {k: bool(b) for k, b in ps.checks.items()},
        "von_neumann": vn.to_dict(),
        "checks": checks,
    }
    lines = ["moment   <A(t1)^k>   <A(t2)^k>"]
    for k in range(3):
        lines.append(f"  k={k + 1}   {oz.moments['X'][k]:9.6g}   {oz.moments['Y'][k]:9.6g}")
    lines.append("")
    lines += [f"[{'PASS' if b else 'FAIL'}] {name}" for name, b in checks.items()]
    _emit(report, args.format, lines)
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    inst = load_instance(_resolve(args.instance))
    o = _options(args, inst)
    if inst.kind in ("pair", "fixture"):
        rep = simulate_consecutive(inst.X, inst.Y, inst.psi, int(o["shots"]), int(o["seed"]))
    elif inst.psi is None:
        raise UsageError("simulate on a process instance needs a state psi")
    else:
        rep = simulate_indirect(inst.process, inst.psi, int(o["shots"]), int(o["seed"]))
    ok = rep.max_abs_deviation <= o["gate"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "instance": inst.name,
        "ok": ok,
        "gate": o["gate"],
        "sample": rep.to_dict(),
        "off_diagonal_counts": rep.off_diagonal_counts(o["value_match_tol"]),
    }
    lines = [f"instance: {inst.name or args.instance}  shots={rep.shots} seed={rep.seed}"]
    keys = sorted(set(rep.theoretical) | set(rep.empirical))
    for k in keys:
        label = f"({k[0]:.4g}, {k[1]:.4g})" if isinstance(k, tuple) else f"{k:.4g}"
        emp = rep.empirical.get(k, 0.0)
        bar = "#" * int(round(40 * emp))
        lines.append(f"  {label:>18}  {rep.counts.get(k, 0):>8}  {emp:.4f} (theory {rep.theoretical.get(k, 0.0):.4f})  {bar}")
    lines.append(f"max |deviation| = {rep.max_abs_deviation:.4g}   total variation = {rep.total_variation:.4g}")
    if inst.kind != "process":
        lines.append(f"off-diagonal counts = {rep.off_diagonal_counts(o['value_match_tol'])}")
    _emit(report, args.format, lines)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help=f"verdict tolerance (default {TOL:g})")
    common.add_argument("--value-match-tol", type=float, dest="value_match_tol",
                        help=f"window for identifying eigenvalues across spectra (default {VALUE_MATCH_TOL:g})")
    common.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    common.add_argument("--samples", type=int, help=f"random states drawn from the cyclic sphere (default {SPHERE_SAMPLES})")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(
        prog="qcorrelate",
        description="Check perfect correlation of observables and precise measurement by measuring processes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("correlate", parents=[common], help="perfect-correlation verdict for a pair of observables")
    p.add_argument("instance", help="instance file, or the name of a shipped fixture")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("measure-check", parents=[common], help="does a measuring process precisely measure A in psi")
    p.add_argument("instance")
    p.set_defaults(func=cmd_measure_check)

    p = sub.add_parser("paper-examples", parents=[common], help="run the built-in 4x4, product-state and von Neumann examples")
    p.set_defaults(func=cmd_paper_examples)

    p = sub.add_parser("simulate", parents=[common], help="Monte-Carlo sampling against the theoretical distribution")
    p.add_argument("instance")
    p.add_argument("--shots", type=int, help=f"number of shots (default {DEFAULT_SHOTS})")
    p.add_argument("--gate", type=float, help=f"pass if max |deviation| is at most this (default {DEFAULT_GATE})")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QCorrelateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
