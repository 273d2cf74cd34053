"""Input and report documents (JSON) for the command line front end.

Complex entries are written ``[re, im]`` and quaternion entries
``[a, b, c, d]``; plain numbers are accepted as real entries on input.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .algebra import HMatrix
from .groups import GeneratorSet, GroupSpec, MembershipError, group_membership, o, so, sp, su, u

SCHEMA_VERSION = 1
_FAMILIES = {"SU": su, "U": u, "Sp": sp, "SO": so, "O": o}


class DocumentError(ValueError):
    """A malformed document; the message starts with the offending path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _entry(value, path: str, quaternionic: bool):
    if isinstance(value, bool):
        raise DocumentError(path, "expected a number or a list of numbers")
    if isinstance(value, (int, float)):
        parts = [float(value)]
    elif isinstance(value, list) and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        parts = [float(v) for v in value]
    else:
        raise DocumentError(path, "expected a number or a list of numbers")
    width = 4 if quaternionic else 2
    if len(parts) > width or not parts:
        shape = "[a, b, c, d]" if quaternionic else "[re, im]"
        raise DocumentError(path, f"expected {shape}")
    if not all(math.isfinite(v) for v in parts):
        raise DocumentError(path, "entries must be finite")
    return parts + [0.0] * (width - len(parts))


def parse_matrix(rows, path: str, size: int, quaternionic: bool):
    if not isinstance(rows, list) or len(rows) != size:
        raise DocumentError(path, f"expected {size} rows")
    comps = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise DocumentError(f"{path}[{r}]", f"expected {size} entries")
        comps.append([_entry(v, f"{path}[{r}][{c}]", quaternionic) for c, v in enumerate(row)])
    arr = np.array(comps, dtype=float)
    if quaternionic:
        return HMatrix.from_components(arr)
    return arr[..., 0] + 1j * arr[..., 1]


def parse_group(doc) -> GroupSpec:
    group = doc.get("group")
    if not isinstance(group, dict):
        raise DocumentError("group", "expected an object with family and n")
    family = group.get("family")
    if family not in _FAMILIES:
        raise DocumentError("group.family", f"expected one of {sorted(_FAMILIES)}")
    n = group.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DocumentError("group.n", "expected a positive integer")
    return _FAMILIES[family](n)


def parse_document(doc, tol: float = 1e-8) -> tuple[GeneratorSet, dict]:
    """Validate a decoded input document; returns the generators and its parameters."""
    if not isinstance(doc, dict):
        raise DocumentError("$", "expected an object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise DocumentError("schema", f"unsupported schema version {schema!r}")
    spec = parse_group(doc)
    raw = doc.get("generators")
    if not isinstance(raw, list) or not raw:
        raise DocumentError("generators", "expected a nonempty list of matrices")
    gens = [parse_matrix(m, f"generators[{t}]", spec.size, spec.quaternionic) for t, m in enumerate(raw)]
    labels = doc.get("labels")
    if labels is None:
        labels = [f"g{t + 1}" for t in range(len(gens))]
    if not isinstance(labels, list) or len(labels) != len(gens) or not all(isinstance(x, str) for x in labels):
        raise DocumentError("labels", "expected one string label per generator")
    for t, g in enumerate(gens):
        report = group_membership(g, spec, tol)
        if not report.ok:
            raise DocumentError(f"generators[{t}]",
                                f"not in {spec} (membership residual {report.residual:.3e})")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise DocumentError("parameters", "expected an object")
    try:
        return GeneratorSet(spec, gens, tuple(labels), tol=tol), params
    except MembershipError as exc:  # pragma: no cover - checked above
        raise DocumentError("generators", str(exc)) from exc


def load_document(path: str, tol: float = 1e-8) -> tuple[GeneratorSet, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DocumentError("$", f"invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return parse_document(doc, tol)


# --------------------------------------------------------------------------
# encoding


def encode_matrix(m) -> list:
    if isinstance(m, HMatrix):
        comps = m.components()
        return [[[float(x) for x in comps[r, c]] for c in range(comps.shape[1])]
                for r in range(comps.shape[0])]
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def encode_number(x):
    """Finite floats stay numbers; non-finite values become strings."""
    x = float(x)
    if math.isfinite(x):
        return x
    return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")


def generator_document(gens: GeneratorSet, params: dict | None = None) -> dict:
    family = gens.group.family
    return {
        "schema": SCHEMA_VERSION,
        "group": {"family": family, "n": gens.group.p},
        "labels": list(gens.labels),
        "generators": [encode_matrix(g) for g in gens.gens],
        "parameters": dict(params or {}),
    }


def dumps(doc) -> str:
    """Canonical serialization: sorted keys, shortest round-trip float repr."""
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"
