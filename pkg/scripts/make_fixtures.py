"""Regenerate the instance files under src/qcorrelate/data/fixtures."""

import json
from pathlib import Path

import numpy as np

from qcorrelate.io import SCHEMA_VERSION, encode_matrix, encode_process, encode_vector, validate
from qcorrelate.measurement import MeasuringProcess
from qcorrelate.models import build_von_neumann, ozawa_counterexample, swap_operator

OUT = Path(__file__).resolve().parents[1] / "src" / "qcorrelate" / "data" / "fixtures"

sz = np.diag([1.0, -1.0])
eye = np.eye(2)
plus = np.array([1.0, 1.0]) / np.sqrt(2)


def doc(kind, name, description, payload, options=None):
    d = {"schema_version": SCHEMA_VERSION, "kind": kind, "name": name,
         "description": description, "payload": payload}
    if options:
        d["options"] = options
    validate(d)
    return d


def main():
    oz = ozawa_counterexample()
    vn = build_von_neumann(sz)
    ident = MeasuringProcess.create(2, 2, plus, np.eye(4), sz)
    docs = {
        "bell": doc(
            "pair", "bell", "sigma_z (x) I and I (x) sigma_z in (|00> + |11>)/sqrt(2)",
            {"X": encode_matrix(np.kron(sz, eye)), "Y": encode_matrix(np.kron(eye, sz)),
             "psi": encode_vector(np.array([1, 0, 0, 1]) / np.sqrt(2))},
            {"seed": 7},
        ),
        "ozawa_s2": doc(
            "fixture", "ozawa_s2", "4x4 Heisenberg pair with equal action on psi but different third moments",
            {"X": encode_matrix(oz.X.matrix), "Y": encode_matrix(oz.Y.matrix),
             "U": encode_matrix(oz.evolution), "psi": encode_vector(oz.psi),
             "moments": {"X": [1, 2, 4], "Y": [1, 2, 3]}},
        ),
        "product_state": doc(
            "fixture", "product_state", "sigma_z (x) I and I (x) sigma_z in |+> (x) |+>, related by the swap",
            {"X": encode_matrix(np.kron(sz, eye)), "Y": encode_matrix(np.kron(eye, sz)),
             "U": encode_matrix(swap_operator(2)), "psi": encode_vector(np.kron(plus, plus))},
        ),
        "von_neumann_sz": doc(
            "process", "von_neumann_sz", "von Neumann model for sigma_z (CNOT interaction), input |+>",
            {"process": encode_process(vn.process), "A": encode_matrix(sz), "psi": encode_vector(plus)},
            {"seed": 7, "shots": 100000},
        ),
        "identity_U": doc(
            "process", "identity_U", "probe never interacts (U = I); meter sigma_z read in |+>",
            {"process": encode_process(ident), "A": encode_matrix(sz), "psi": encode_vector(plus)},
        ),
    }
    OUT.mkdir(parents=True, exist_ok=True)
    for name, d in docs.items():
        (OUT / f"{name}.json").write_text(json.dumps(d, indent=1) + "\n")


if __name__ == "__main__":
    main()
