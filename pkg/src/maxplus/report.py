"""Serialization of library results for the command line.

Every result type has one payload form (plain dicts/lists with a fixed key
order) shared by the JSON and text renderers.  Nodes and variables are
numbered from 1 in payloads, matching the ``x1, x2, ...`` notation.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from functools import singledispatch

import numpy as np

from .attraction import AttractionSystem
from .cyclic import CyclicClasses
from .io import SEMIRINGS
from .periodic import CoreMatrix, CsrDecomposition, ReducedPower
from .spectral import SpectralData, VisualizedMatrix


def scalar(v: float, semiring: str = "maxplus") -> float:
    """A max-plus value as seen in ``semiring``."""
    v = float(v)
    return math.exp(v) if semiring == "maxtimes" else v


def _nodes(nodes) -> list[int]:
    return [int(v) + 1 for v in nodes]


@singledispatch
def to_payload(obj, semiring: str = "maxplus"):
    raise TypeError(f"no payload form for {type(obj).__name__}")


@to_payload.register
def _(obj: np.ndarray, semiring: str = "maxplus"):
    if obj.ndim == 1:
        return [scalar(v, semiring) for v in obj]
    return [[scalar(v, semiring) for v in row] for row in obj]


@to_payload.register
def _(obj: SpectralData, semiring: str = "maxplus"):
    return {
        "lambda": scalar(obj.lam, semiring),
        "critical_nodes": _nodes(obj.critical_nodes),
        "critical_edges": [[i + 1, j + 1] for i, j in sorted(obj.critical_edges)],
        "components": [_nodes(c) for c in obj.components],
        "cyclicities": list(obj.cyclicities),
        "gamma": obj.gamma,
    }


@to_payload.register
def _(obj: CyclicClasses, semiring: str = "maxplus"):
    return {
        "components": [{"cyclicity": g, "classes": [_nodes(c) for c in comp]}
                       for g, comp in zip(obj.gammas, obj.classes)],
        "total_classes": obj.total,
    }


@to_payload.register
def _(obj: VisualizedMatrix, semiring: str = "maxplus"):
    return {
        "strict": obj.strict,
        "scaling": to_payload(obj.scaling, semiring),
        "matrix": to_payload(obj.matrix, semiring),
    }


@to_payload.register
def _(obj: AttractionSystem, semiring: str = "maxplus"):
    chains = []
    for ch in obj.chains:
        sides = [{"class": _nodes(side.cls),
                  "terms": [[v + 1, scalar(c, semiring)] for v, c in side.terms]}
                 for side in ch.sides]
        chains.append({"component": ch.component + 1, "sides": sides})
    return {"t": obj.t, "chains": chains}


@to_payload.register
def _(obj: CsrDecomposition, semiring: str = "maxplus"):
    return {
        "gamma": obj.gamma,
        "nodes": _nodes(obj.nodes),
        "C": to_payload(obj.C, semiring),
        "S": to_payload(obj.S, semiring),
        "R": to_payload(obj.R, semiring),
    }


@to_payload.register
def _(obj: CoreMatrix, semiring: str = "maxplus"):
    return {
        "groups": [_nodes(g) for g in obj.groups],
        "alpha": to_payload(obj.alpha, semiring),
        "alpha_star": to_payload(obj.alpha_star, semiring),
    }


@to_payload.register
def _(obj: ReducedPower, semiring: str = "maxplus"):
    return {
        "labels": [_nodes(g) for g in obj.labels],
        "matrix": to_payload(obj.matrix, semiring),
    }


def emit_json(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats as ``%.17g`` and the semiring zero as ``"-inf"``.

    Key order is the insertion order of the payload dicts.
    """
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {emit_json(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(emit_json(v, indent, _level + 1) for v in obj) + "]"
        items = [pad + emit_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if v == -math.inf:
            return '"-inf"'
        if not math.isfinite(v):
            raise ValueError(f"cannot serialize {v!r}")
        return "%.17g" % v
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_json(text: str):
    """Inverse of :func:`emit_json` (``"-inf"`` strings become ``-inf``)."""
    def fix(v):
        if v == "-inf":
            return -math.inf
        if isinstance(v, list):
            return [fix(x) for x in v]
        if isinstance(v, dict):
            return {k: fix(x) for k, x in v.items()}
        return v
    return fix(json.loads(text))


def file_digest(path) -> dict:
    with open(path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    return {"path": str(path), "sha256": digest}


@dataclass
class Report:
    command: str
    semiring: str
    inputs: list = field(default_factory=list)
    result: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.semiring not in SEMIRINGS:
            raise ValueError(f"unknown semiring {self.semiring!r}")

    def payload(self) -> dict:
        return {"command": self.command, "semiring": self.semiring, "inputs": self.inputs,
                "result": self.result}

    def to_json(self) -> str:
        return emit_json(self.payload()) + "\n"
