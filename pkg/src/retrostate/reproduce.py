"""Recompute the worked examples and compare with stored reference values."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass
from importlib import resources
from typing import Dict, List

import numpy as np

from .engineer import make_plan
from .multiport import ColumnSpec, complete_unitary, dft_unitary
from .optimize import optimize_lagrange, optimize_n1
from .rootcore import TargetState, char_polynomial, find_roots

CASES = ("n1-dft", "n1-opt", "n2-dft", "n2-opt")


@dataclass(frozen=True)
class ReproRow:
    case: str
    quantity: str
    reference: float
    computed: float
    diff: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.diff <= self.tol


def reference_values() -> List[dict]:
    text = resources.files("retrostate").joinpath("data/reference_values.json").read_text()
    return json.loads(text)["rows"]


def _complex_parts(prefix: str, z: complex) -> Dict[str, float]:
    return {f"{prefix}.re": z.real, f"{prefix}.im": z.imag}


def _optimized_plan(target: TargetState, x: np.ndarray, mode: str = "multi"):
    U = complete_unitary([ColumnSpec(0, np.sqrt(x).astype(complex))])
    return make_plan(target, U, mode)


def compute_case(case: str) -> Dict[str, float]:
    if case == "n1-dft":
        plan = make_plan(TargetState([1, 1]), dft_unitary(2))
        out = {}
        out.update(_complex_parts("g1", plan.roots.g[0]))
        out.update(_complex_parts("beta1", plan.betas[0]))
        out.update(kbar2=plan.success, k2=plan.k2, ratio_pct=100 * plan.ratio)
        return out
    if case == "n1-opt":
        target = TargetState([1, 1])
        roots = find_roots(char_polynomial(target))
        res = optimize_n1(roots.g[0])
        plan = _optimized_plan(target, res.weights.x)
        x0 = res.weights.x[0]
        return {
            "x0": x0,
            "kbar2": plan.success,
            "abs_beta1": abs(plan.betas[0]),
            "ratio_pct": 100 * plan.ratio,
            "t2_pct": 100 * x0,
            "r2_pct": 100 * (1 - x0),
        }
    if case == "n2-dft":
        plan = make_plan(TargetState([1, 1, 1]), dft_unitary(3))
        out = {}
        out.update(_complex_parts("g1", plan.roots.g[0]))
        out.update(_complex_parts("g2", plan.roots.g[1]))
        out.update({"beta1.re": plan.betas[0].real, "beta2.re": plan.betas[1].real})
        out.update(kbar2=plan.success, k2=plan.k2, ratio_pct=100 * plan.ratio)
        return out
    if case == "n2-opt":
        target = TargetState([1, 1, 1])
        res = optimize_lagrange(find_roots(char_polynomial(target)))
        multi = _optimized_plan(target, res.weights.x)
        single = _optimized_plan(target, res.weights.x, "single")
        col1 = np.abs(single.unitary.entries[:, 1]) ** 2
        x = res.weights.x
        return {
            "x0": x[0],
            "x1": x[1],
            "x2": x[2],
            "kbar2": multi.success,
            "ratio_pct": 100 * multi.ratio,
            "sum_beta2": multi.total_drive,
            "abs_beta1_single": abs(single.betas[0]),
            "U01_sq": col1[0],
            "U11_sq": col1[1],
            "U21_sq": col1[2],
        }
    raise ValueError(f"unknown case {case!r}; choose from {CASES} or 'all'")


def reproduce(case: str = "all") -> List[ReproRow]:
    cases = CASES if case == "all" else (case,)
    computed = {c: compute_case(c) for c in cases}
    rows = []
    for ref in reference_values():
        if ref["case"] not in computed:
            continue
        value = float(computed[ref["case"]][ref["quantity"]])
        rows.append(
            ReproRow(ref["case"], ref["quantity"], ref["value"], value, abs(value - ref["value"]), ref["tol"])
        )
    return rows


def format_rows(rows: List[ReproRow], fmt: str = "table") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["case", "quantity", "paper", "computed", "diff", "pass"])
        for r in rows:
            w.writerow([r.case, r.quantity, repr(r.reference), repr(r.computed), repr(r.diff), str(r.passed).lower()])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([dict(asdict(r), passed=r.passed) for r in rows], indent=2) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"{'case':<8} {'quantity':<17} {'reference':>12} {'computed':>14} {'diff':>10} {'tol':>8}  ok"]
    for r in rows:
        lines.append(
            f"{r.case:<8} {r.quantity:<17} {r.reference:>12.6g} {r.computed:>14.8g} {r.diff:>10.2e} {r.tol:>8.0e}  "
            + ("PASS" if r.passed else "FAIL")
        )
    return "\n".join(lines) + "\n"
