"""JSON encoding of matrices, vectors, processes and instance files.

A complex scalar is ``[re, im]``, a vector a list of scalars and a matrix a
list of rows.  Decoding also accepts bare real numbers.  The JSON Schema
ships as ``qcorrelate/data/schema.json``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .errors import QCorrelateError, SchemaError
from .linalg import Observable
from .measurement import MeasuringProcess

SCHEMA_VERSION = "1.0"
FIXTURE_NAMES = ("bell", "ozawa_s2", "product_state", "von_neumann_sz", "identity_U")


def encode_complex(z) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def encode_vector(v) -> list:
    return [encode_complex(z) for z in np.asarray(v).reshape(-1)]


def encode_matrix(m) -> list:
    return [encode_vector(row) for row in np.asarray(m)]


def decode_complex(z) -> complex:
    if isinstance(z, (int, float)) and not isinstance(z, bool):
        return complex(z)
    if isinstance(z, list) and len(z) == 2:
        return complex(float(z[0]), float(z[1]))
    raise SchemaError(f"not a complex scalar: {z!r}")


def decode_vector(v) -> np.ndarray:
    if not isinstance(v, list) or not v:
        raise SchemaError("vector must be a non-empty list")
    return np.array([decode_complex(z) for z in v], dtype=complex)


def decode_matrix(m) -> np.ndarray:
    if not isinstance(m, list) or not m:
        raise SchemaError("matrix must be a non-empty list of rows")
    rows = [decode_vector(r) for r in m]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError("matrix rows have unequal lengths")
    return np.stack(rows)


def encode_process(p: MeasuringProcess) -> dict:
    return {
        "dimH": p.dim_h,
        "dimK": p.dim_k,
        "xi": encode_vector(p.xi),
        "U": encode_matrix(p.unitary),
        "M": encode_matrix(p.meter.matrix),
    }


def decode_process(d: dict) -> MeasuringProcess:
    return MeasuringProcess.create(
        d["dimH"], d["dimK"], decode_vector(d["xi"]), decode_matrix(d["U"]), decode_matrix(d["M"])
    )


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("qcorrelate").joinpath("data/schema.json").read_text()
    return json.loads(text)


def validate(doc: dict, definition: str | None = None) -> None:
    """Validate ``doc`` against the instance schema, or against one of its ``$defs``."""
    s = schema()
    if definition is not None:
        s = {"$defs": s["$defs"], "$ref": f"#/$defs/{definition}"}
    try:
        jsonschema.validate(doc, s)
    except jsonschema.ValidationError as exc:
        raise SchemaError(exc.message) from exc


@dataclass
class Instance:
    """A parsed instance file with its arrays decoded."""

    kind: str
    name: str | None
    options: dict
    X: np.ndarray | None = None
    Y: np.ndarray | None = None
    U: np.ndarray | None = None
    psi: np.ndarray | None = None
    A: np.ndarray | None = None
    process: MeasuringProcess | None = None
    extra: dict = field(default_factory=dict)


def parse_instance(doc: dict) -> Instance:
    validate(doc)
    payload = doc["payload"]
    inst = Instance(doc["kind"], doc.get("name"), dict(doc.get("options", {})))
    try:
        if inst.kind in ("pair", "fixture"):
            inst.X = decode_matrix(payload["X"])
            inst.Y = decode_matrix(payload["Y"])
            inst.psi = decode_vector(payload["psi"])
            if inst.kind == "fixture":
                inst.U = decode_matrix(payload["U"])
                inst.extra["moments"] = payload.get("moments")
        else:
            inst.process = decode_process(payload["process"])
            if "A" in payload:
                inst.A = decode_matrix(payload["A"])
            if "psi" in payload:
                inst.psi = decode_vector(payload["psi"])
    except QCorrelateError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from exc
    return inst


def load_instance(path: str | Path) -> Instance:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("instance file must hold a JSON object")
    return parse_instance(doc)


def fixture_path(name: str) -> Path:
    """Path of a shipped fixture file, by bare name (``"bell"``) or file name."""
    stem = name[:-5] if name.endswith(".json") else name
    if stem not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    return Path(str(resources.files("qcorrelate").joinpath(f"data/fixtures/{stem}.json")))


def pair_document(X, Y, psi, name=None, options=None) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "pair",
        "payload": {"X": encode_matrix(_m(X)), "Y": encode_matrix(_m(Y)), "psi": encode_vector(psi)},
    }
    if name:
        doc["name"] = name
    if options:
        doc["options"] = options
    return doc


def _m(x):
    return x.matrix if isinstance(x, Observable) else x
