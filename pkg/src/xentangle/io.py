"""
State documents (JSON) and tabular output (CSV).

A state document is either an explicit matrix::

    {"schema": 1, "matrix": [[[re, im], ...4], ...4]}

or a named family with its parameters::

    {"schema": 1, "family": "werner", "params": {"k": 1, "q": 0.6}}

Family parameters:

==================  ===============================================
bell                ``k``
werner              ``k``, ``q``
bell_mixture        ``b`` (four weights)
generalized_werner  ``q_vec`` (four coefficients), ``s``
x_state             ``populations`` (four), ``x``, ``theta``, ``y``, ``phi``
==================  ===============================================

For ``x_state`` the coherence moduli ``x``, ``y`` and the phases ``theta``,
``phi`` default to 0. The ``schema`` field is optional on
input and always written on output.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from typing import IO, Iterable, Sequence

import numpy as np

from .states import (
    XState,
    make_bell,
    make_bell_mixture,
    make_generalized_werner,
    make_werner,
)

SCHEMA_VERSION = 1
FAMILIES = ("bell", "werner", "bell_mixture", "generalized_werner", "x_state")

_REQUIRED = {
    "bell": ("k",),
    "werner": ("k", "q"),
    "bell_mixture": ("b",),
    "generalized_werner": ("q_vec", "s"),
    "x_state": ("populations",),
}


class SchemaError(ValueError):
    """The document does not follow the state schema."""


def _number(v, name):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SchemaError(f"{name} must be a number, got {v!r}")
    if not math.isfinite(v):
        raise SchemaError(f"{name} must be finite")
    return float(v)


def _int(v, name):
    if isinstance(v, bool) or not isinstance(v, int):
        raise SchemaError(f"{name} must be an integer, got {v!r}")
    return v


def _vector(v, name, n=4):
    if not isinstance(v, list) or len(v) != n:
        raise SchemaError(f"{name} must be a list of {n} numbers")
    return [_number(a, f"{name}[{i}]") for i, a in enumerate(v)]


def matrix_from_json(rows) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != 4:
        raise SchemaError("matrix must be a 4x4 array of [re, im] pairs")
    out = np.empty((4, 4), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != 4:
            raise SchemaError(f"matrix row {i} must hold 4 entries")
        for j, z in enumerate(row):
            if not isinstance(z, list) or len(z) != 2:
                raise SchemaError(f"matrix[{i}][{j}] must be a [re, im] pair")
            out[i, j] = complex(_number(z[0], "re"), _number(z[1], "im"))
    return out


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def state_from_params(family: str, params: dict):
    """Build a family member; returns an :class:`XState` or a DensityMatrix.

    Raises
    ------
    SchemaError
        Unknown family, missing or mistyped parameters.
    ValueError
        Parameters outside the family's domain.
    """
    if family not in FAMILIES:
        raise SchemaError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if not isinstance(params, dict):
        raise SchemaError("params must be an object")
    missing = [k for k in _REQUIRED[family] if k not in params]
    if missing:
        raise SchemaError(f"family {family!r} needs parameter(s) {', '.join(missing)}")
    if family == "bell":
        return make_bell(_int(params["k"], "k"))
    if family == "werner":
        return make_werner(_int(params["k"], "k"), _number(params["q"], "q"))
    if family == "bell_mixture":
        return make_bell_mixture(_vector(params["b"], "b"))
    if family == "generalized_werner":
        return make_generalized_werner(_vector(params["q_vec"], "q_vec"),
                                       _number(params["s"], "s"))
    pops = _vector(params["populations"], "populations")
    return XState(*pops, x=_number(params.get("x", 0.0), "x"),
                  theta=_number(params.get("theta", 0.0), "theta"),
                  y=_number(params.get("y", 0.0), "y"),
                  phi=_number(params.get("phi", 0.0), "phi"))


def parse_state_document(doc) -> np.ndarray:
    """Matrix of the state described by a parsed JSON document.

    The matrix is returned unvalidated, so that callers can report *why*
    an explicit matrix is not a state.
    """
    if not isinstance(doc, dict):
        raise SchemaError("state document must be a JSON object")
    schema = doc.get("schema", SCHEMA_VERSION)
    if schema != SCHEMA_VERSION:
        raise SchemaError(f"unsupported schema version {schema!r}")
    if "matrix" in doc and "family" in doc:
        raise SchemaError("give either 'matrix' or 'family', not both")
    if "matrix" in doc:
        return matrix_from_json(doc["matrix"])
    if "family" in doc:
        state = state_from_params(doc["family"], doc.get("params", {}))
        return np.array(state.matrix() if isinstance(state, XState) else state.m)
    raise SchemaError("state document needs a 'matrix' or a 'family' field")


def load_state(path: str) -> np.ndarray:
    """Read a state document from ``path``; ``-`` reads standard input.

    Raises OSError for unreadable files and SchemaError for bad JSON.
    """
    if path == "-":
        text = sys.stdin.read()
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None
    return parse_state_document(doc)


def matrix_document(m) -> dict:
    return {"schema": SCHEMA_VERSION, "matrix": matrix_to_json(m)}


def family_document(family: str, params: dict) -> dict:
    return {"schema": SCHEMA_VERSION, "family": family, "params": dict(params)}


# --- CSV ------------------------------------------------------------------

def format_value(v) -> str:
    """Lossless text for one CSV cell (17 significant digits for floats)."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def write_csv(fh: IO[str], header: Sequence[str], columns: Sequence[Iterable]) -> int:
    """Write equally long columns under ``header``; returns the row count."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    n = 0
    for row in zip(*columns, strict=True):
        writer.writerow([format_value(v) for v in row])
        n += 1
    return n


def read_csv(fh: IO[str]) -> dict[str, list[str]]:
    """Columns of a CSV written by :func:`write_csv`, as strings."""
    reader = csv.reader(fh)
    header = next(reader)
    cols: dict[str, list[str]] = {h: [] for h in header}
    for row in reader:
        for h, v in zip(header, row):
            cols[h].append(v)
    return cols
