"""JSON system specifications and element documents.

Complex numbers are always two-element ``[re, im]`` arrays.  A system
document is one of::

    {"kind": "matrix", "n": 2, "rho": [[[re, im], ...], ...], "tau": [[...], ...]}
    {"kind": "matrix", "preset": "example_4_7", "c1": [re, im], "c2": [re, im]}
    {"kind": "measure", "mu": [0.5, 0.5], "T": [1, 0]}
    {"kind": "measure", "preset": "rotation", "N": 5, "r": 1}

``tau`` is the ``n^2 x n^2`` superoperator in the row-major ``vec`` convention.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .algebra import AlgebraElement, AlgebraKind, State, StarDynamicalSystem, Superoperator, build_diagonal_swap
from .errors import PreconditionError
from .measure import FiniteMeasureSystem, embed_commutative, rotation_system


def parse_complex(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v):
        return complex(v[0], v[1])
    raise PreconditionError(f"expected a complex number as [re, im], got {v!r}")


def parse_complex_matrix(rows) -> np.ndarray:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise PreconditionError("expected a matrix as a list of rows of [re, im] pairs")
    out = np.array([[parse_complex(v) for v in row] for row in rows], dtype=np.complex128)
    if out.ndim != 2:
        raise PreconditionError("matrix rows have unequal lengths")
    return out


def complex_to_json(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def matrix_to_json(M) -> list:
    return [[complex_to_json(z) for z in row] for row in np.asarray(M)]


def load_json(source):
    """Parse ``source`` as inline JSON when it looks like JSON, otherwise as a file path."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source).strip()
    if text[:1] in "[{":
        return json.loads(text)
    return json.loads(Path(source).read_text())


def parse_system(doc):
    """Return ``(system, measure_system_or_None)`` for a specification document."""
    doc = load_json(doc)
    kind = doc.get("kind")
    preset = doc.get("preset")
    if kind == "matrix":
        # "example_4_7" is the external name of the swap preset; "diagonal_swap" is an alias
        if preset in ("example_4_7", "diagonal_swap"):
            return build_diagonal_swap(parse_complex(doc["c1"]), parse_complex(doc["c2"])), None
        if preset is not None:
            raise PreconditionError(f"unknown matrix preset {preset!r}")
        n = int(doc["n"])
        ak = AlgebraKind.matrix(n)
        rho = parse_complex_matrix(doc["rho"])
        tau = parse_complex_matrix(doc["tau"])
        return StarDynamicalSystem(ak, State(ak, rho), Superoperator(ak, tau)), None
    if kind == "measure":
        if preset == "rotation":
            fms = rotation_system(int(doc["N"]), int(doc["r"]))
        elif preset is None:
            fms = FiniteMeasureSystem(doc["mu"], doc["T"])
        else:
            raise PreconditionError(f"unknown measure preset {preset!r}")
        return embed_commutative(fms), fms
    raise PreconditionError(f"system kind must be 'matrix' or 'measure', got {kind!r}")


def parse_element(doc, system: StarDynamicalSystem):
    """An element document: a ``[re, im]`` matrix, or (function algebras) a point-index array.

    Returns ``(element, points_or_None)``.
    """
    doc = load_json(doc)
    kind = system.kind
    if not kind.is_matrix and isinstance(doc, list) and all(isinstance(p, int) and not isinstance(p, bool) for p in doc):
        return kind.indicator(doc), sorted(set(doc))
    if kind.is_matrix:
        return AlgebraElement(kind, parse_complex_matrix(doc)), None
    values = np.array([parse_complex(v) for v in doc], dtype=np.complex128)
    return AlgebraElement(kind, values), None


def system_to_json(system: StarDynamicalSystem) -> dict:
    if not system.kind.is_matrix:
        raise PreconditionError("only matrix systems have a raw JSON form; use a measure document")
    return {
        "kind": "matrix",
        "n": system.kind.size,
        "rho": matrix_to_json(system.state.rho),
        "tau": matrix_to_json(system.tau.T),
    }
