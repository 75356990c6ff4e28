"""JSON plan documents.

A plan file records the target, the multiport, the roots and coherent
amplitudes, and the success weight. Complex arrays are stored as
``{"re": [...], "im": [...]}``; matrices as ``{"dim": d, "re": [[...]], "im": [[...]]}``
(row-major). Unknown fields are rejected on read.
"""

from __future__ import annotations

import hashlib
import json
from typing import Any, Dict, Optional

import jsonschema
import numpy as np

from . import __version__
from .engineer import EngineeringPlan, PlanMode
from .errors import PlanFormatError
from .multiport import MultiportUnitary
from .optimize import OptimizationResult
from .rootcore import RootSet, TargetState

_NUM = {"type": "number"}
_VEC = {
    "type": "object",
    "properties": {"re": {"type": "array", "items": _NUM}, "im": {"type": "array", "items": _NUM}},
    "required": ["re", "im"],
    "additionalProperties": False,
}
_SCALAR = {
    "type": "object",
    "properties": {"re": _NUM, "im": _NUM},
    "required": ["re", "im"],
    "additionalProperties": False,
}
_ROWS = {"type": "array", "items": {"type": "array", "items": _NUM}}

MATRIX_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {"dim": {"type": "integer", "minimum": 2}, "re": _ROWS, "im": _ROWS},
    "required": ["dim", "re", "im"],
    "additionalProperties": False,
}

OPTIMIZATION_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "method": {"enum": ["closed-form-n1", "lagrange", "projected-gradient", "grid"]},
        "weights": {"type": "array", "items": _NUM},
        "value": _NUM,
        "baseline": _NUM,
        "iterations": {"type": "integer"},
        "converged": {"type": "boolean"},
        "boundary": {"type": "boolean"},
    },
    "required": ["method", "weights", "value", "baseline", "iterations", "converged", "boundary"],
    "additionalProperties": False,
}

PLAN_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "properties": {
        "tool": {"const": "retrostate"},
        "version": {"type": "string"},
        "input_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "mode": {"enum": ["multi", "single"]},
        "phase": _NUM,
        "target": _VEC,
        "unitary": MATRIX_SCHEMA,
        "g": _VEC,
        "g0": _SCALAR,
        "k": _SCALAR,
        "betas": _VEC,
        "kbar": _SCALAR,
        "success": _NUM,
        "ratio": _NUM,
        "optimization": OPTIMIZATION_SCHEMA,
    },
    "required": [
        "tool", "version", "input_hash", "mode", "phase", "target", "unitary",
        "g", "g0", "k", "betas", "kbar", "success", "ratio",
    ],
    "additionalProperties": False,
}


def _vec(a) -> dict:
    a = np.asarray(a, dtype=complex)
    return {"re": a.real.tolist(), "im": a.imag.tolist()}


def _scalar(z) -> dict:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def _unvec(d) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def _unscalar(d) -> complex:
    return complex(d["re"], d["im"])


def dumps(doc: dict) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def input_hash(target: TargetState, unitary: MultiportUnitary, mode: str, phase: float, extra=None) -> str:
    body = {
        "target": _vec(target.coeffs),
        "unitary": unitary.to_dict(),
        "mode": str(mode),
        "phase": float(phase),
        "extra": extra,
    }
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def optimization_doc(result: OptimizationResult, baseline: float) -> dict:
    return {
        "method": result.method.value,
        "weights": result.weights.x.tolist(),
        "value": float(result.value),
        "baseline": float(baseline),
        "iterations": int(result.iterations),
        "converged": bool(result.converged),
        "boundary": bool(result.boundary),
    }


def plan_to_doc(
    plan: EngineeringPlan,
    optimization: Optional[dict] = None,
    source_unitary: Optional[MultiportUnitary] = None,
) -> dict:
    """Plan as a JSON-ready dict.

    ``source_unitary`` is the multiport the user supplied, which differs from
    ``plan.unitary`` in single-input mode; it enters the input hash.
    """
    src = source_unitary if source_unitary is not None else plan.unitary
    doc = {
        "tool": "retrostate",
        "version": __version__,
        "input_hash": input_hash(plan.target, src, plan.mode.value, plan.phase, optimization and optimization["method"]),
        "mode": plan.mode.value,
        "phase": float(plan.phase),
        "target": _vec(plan.target.coeffs),
        "unitary": plan.unitary.to_dict(),
        "g": _vec(plan.roots.g),
        "g0": _scalar(plan.roots.g0),
        "k": _scalar(plan.roots.k),
        "betas": _vec(plan.betas),
        "kbar": _scalar(plan.kbar),
        "success": float(plan.success),
        "ratio": float(plan.ratio),
    }
    if optimization is not None:
        doc["optimization"] = optimization
    validate(doc)
    return doc


def validate(doc: dict) -> None:
    try:
        jsonschema.validate(doc, PLAN_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise PlanFormatError(f"invalid plan document: {exc.message}") from None
    n = doc["unitary"]["dim"]
    sizes = {
        "target": len(doc["target"]["re"]),
        "g": len(doc["g"]["re"]) + 1,
        "betas": len(doc["betas"]["re"]) + 1,
    }
    for key, size in sizes.items():
        if size != n or len(doc[key]["im"]) != len(doc[key]["re"]):
            raise PlanFormatError(f"field {key!r} does not match a {n}-mode multiport")


def parse(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanFormatError(f"not valid JSON: {exc}") from None
    validate(doc)
    return doc


def plan_from_doc(doc: dict) -> EngineeringPlan:
    """Rebuild the plan exactly as stored; nothing is recomputed."""
    validate(doc)
    roots = RootSet(_unvec(doc["g"]), g0=_unscalar(doc["g0"]), k=_unscalar(doc["k"]))
    return EngineeringPlan(
        target=TargetState(_unvec(doc["target"])),
        unitary=MultiportUnitary.from_dict(doc["unitary"]),
        roots=roots,
        betas=_unvec(doc["betas"]),
        kbar=_unscalar(doc["kbar"]),
        success=doc["success"],
        mode=PlanMode(doc["mode"]),
        phase=doc["phase"],
    )


def load(path) -> dict:
    with open(path) as fh:
        return parse(fh.read())


def save(doc: dict, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(doc))
