"""Command-line entry point.

Subcommands: ``engineer``, ``optimize``, ``verify``, ``reproduce``.

Exit codes: 0 success, 1 reproduction mismatch, 2 invalid input,
3 optimizer did not converge, 4 oracle mismatch, 5 oracle cutoff too small.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

import numpy as np

from .engineer import make_plan, overlap
from .errors import CutoffTooSmall, NotConverged, RetroError
from .focksim import default_cutoff, forward_amplitudes
from .multiport import ColumnSpec, MultiportUnitary, complete_unitary, dft_unitary
from .optimize import ColumnWeights, objective, optimize
from .planfile import MATRIX_SCHEMA, load, optimization_doc, plan_from_doc, plan_to_doc, save
from .reproduce import CASES, format_rows, reproduce
from .rootcore import TargetState, char_polynomial, find_roots

EXIT_OK = 0
EXIT_REPRO_FAIL = 1
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3
EXIT_MISMATCH = 4
EXIT_CUTOFF = 5

VERIFY_TOL = 1e-7
HIGH_PHOTON_TOL = 1e-8


class UsageError(RetroError, ValueError):
    pass


def parse_coefficients(text: str) -> np.ndarray:
    """``"1,1+0.5i,-2i"`` -> complex array. Whitespace is ignored."""
    out = []
    for item in text.replace(" ", "").split(","):
        if not item:
            raise UsageError(f"empty coefficient in {text!r}")
        try:
            out.append(complex(item.replace("i", "j")))
        except ValueError:
            raise UsageError(f"cannot parse coefficient {item!r}") from None
    return np.array(out)


def load_target(arg: str) -> TargetState:
    if os.path.isfile(arg):
        with open(arg) as fh:
            doc = json.load(fh)
        if isinstance(doc, dict) and "coeffs" in doc:
            doc = doc["coeffs"]
        if isinstance(doc, dict):
            c = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc.get("im", [0] * len(doc["re"])), dtype=float)
        else:
            c = np.asarray(doc, dtype=complex)
    else:
        c = parse_coefficients(arg)
    if c.size < 2 or not np.any(c[1:]):
        raise UsageError("target has N = 0: at least one photon must be detected (N >= 1)")
    return TargetState(c)


def load_unitary(arg: str, dim: int) -> MultiportUnitary:
    if arg == "dft":
        return dft_unitary(dim)
    import jsonschema

    with open(arg) as fh:
        doc = json.load(fh)
    try:
        jsonschema.validate(doc, MATRIX_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise UsageError(f"invalid matrix file: {exc.message}") from None
    U = MultiportUnitary.from_dict(doc)
    if U.dim != dim:
        raise UsageError(f"unitary has dimension {U.dim}, target needs {dim}")
    return U


def _fail(code: int, exc: Exception) -> int:
    print(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}), file=sys.stderr)
    return code


def _emit(doc: dict, out: Optional[str]) -> None:
    if out:
        save(doc, out)


def _summary(plan, header: str = "") -> None:
    if header:
        print(header)
    for m, b in enumerate(plan.betas, start=1):
        print(f"  beta_{m} = {b.real:+.6f} {b.imag:+.6f}i   |beta_{m}| = {abs(b):.6f}")
    print(f"  |kbar|^2 = {plan.success:.6g}")
    print(f"  k^2      = {plan.k2:.6g}")
    print(f"  ratio    = {100 * plan.ratio:.2f}%")


def cmd_engineer(args) -> int:
    target = load_target(args.target)
    U = load_unitary(args.unitary, target.N + 1)
    plan = make_plan(target, U, args.mode, args.phase)
    doc = plan_to_doc(plan, source_unitary=U)
    _summary(plan, f"engineered N={target.N} target on {U.label} multiport ({plan.mode.value}-input)")
    _emit(doc, args.out)
    return EXIT_OK


def cmd_optimize(args) -> int:
    target = load_target(args.target)
    roots = find_roots(char_polynomial(target))
    baseline = objective(ColumnWeights.uniform(target.N), roots)
    result = optimize(roots, args.method)
    U = complete_unitary([ColumnSpec(0, result.weights.column())])
    plan = make_plan(target, U, args.mode, args.phase)
    doc = plan_to_doc(plan, optimization_doc(result, baseline))
    print(f"optimized first column for N={target.N} target ({result.method.value}, {result.iterations} iterations)")
    print("  |U_n0|^2 = " + ", ".join(f"{x:.6f}" for x in result.weights.x))
    print(f"  |kbar|^2: {baseline:.6g} (DFT) -> {result.value:.6g} (optimized)")
    if result.boundary:
        print("  optimum is a boundary supremum (|U_00|^2 -> 0); reported at the weight floor")
    _summary(plan)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = load(args.plan)
    plan = plan_from_doc(doc)
    q_max = plan.N + 2
    cutoff = args.cutoff if args.cutoff is not None else default_cutoff(plan.betas, plan.N, q_max)
    try:
        A, report = forward_amplitudes(plan.unitary, plan.betas, q_max, cutoff)
    except CutoffTooSmall as exc:
        return _fail(EXIT_CUTOFF, exc)
    oracle = A.conj()
    closed = plan.state()
    fid_target = overlap(oracle, plan.target.coeffs)
    fid_closed = overlap(oracle, closed)
    high = float(np.max(np.abs(oracle[plan.N + 1:]))) if q_max > plan.N else 0.0

    scale = np.linalg.norm(oracle)
    print(f"{'q':>3} {'oracle (normalized)':>28} {'target':>28}")
    for q in range(q_max + 1):
        o = oracle[q] / scale if scale else 0j
        t = plan.target.coeffs[q] if q <= plan.N else 0j
        print(f"{q:>3} {o.real:+.8f} {o.imag:+.8f}i {t.real:+.8f} {t.imag:+.8f}i")
    print(f"overlap(oracle, target)       = {fid_target:.12f}")
    print(f"overlap(oracle, closed form)  = {fid_closed:.12f}")
    print(f"max |coeff| above N           = {high:.3e}")
    print(f"cutoff {report.cutoff}: norm deficit {report.deficit:.3e}, amplitude bound {report.amplitude_bound:.3e}")
    if fid_target < 1.0 - VERIFY_TOL or high > HIGH_PHOTON_TOL:
        print("MISMATCH")
        return EXIT_MISMATCH
    print("OK")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    rows = reproduce(args.case)
    sys.stdout.write(format_rows(rows, args.format))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_REPRO_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="retrostate", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def target_opts(sp):
        sp.add_argument("--target", required=True, help="JSON file or inline coefficients, e.g. '1,1,1' or '1,0.5+0.5i'")
        sp.add_argument("--mode", choices=["multi", "single"], default="multi")
        sp.add_argument("--phase", type=float, default=0.0, help="phase of the single coherent input (radians)")
        sp.add_argument("--out", help="write the plan JSON here")

    e = sub.add_parser("engineer", help="coherent inputs for a target on a given multiport")
    target_opts(e)
    e.add_argument("--unitary", default="dft", help="'dft' or a matrix JSON file")
    e.set_defaults(func=cmd_engineer)

    o = sub.add_parser("optimize", help="optimize the multiport first column for a target")
    target_opts(o)
    o.add_argument("--method", choices=["lagrange", "grid", "auto"], default="auto")
    o.set_defaults(func=cmd_optimize)

    v = sub.add_parser("verify", help="check a plan against the Fock-space simulation")
    v.add_argument("--plan", required=True)
    v.add_argument("--cutoff", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reproduce", help="recompute the worked examples against stored reference values")
    r.add_argument("--case", choices=list(CASES) + ["all"], default="all")
    r.add_argument("--format", choices=["table", "csv", "json"], default="table")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotConverged as exc:
        return _fail(EXIT_NOT_CONVERGED, exc)
    except CutoffTooSmall as exc:
        return _fail(EXIT_CUTOFF, exc)
    except (RetroError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _fail(EXIT_INVALID, exc)


if __name__ == "__main__":
    sys.exit(main())
