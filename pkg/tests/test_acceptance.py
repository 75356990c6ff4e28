"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v -s`` to see the lines
inline; they are printed past output capture either way.
"""

import time

import numpy as np
import pytest

from retrostate.engineer import (
    PlanMode,
    betas_from_roots,
    kbar,
    make_plan,
    overlap,
    roots_from_betas,
    success_metric,
)
from retrostate.focksim import fock_amplitude, permanent, permanent_naive, retrodictive_state_oracle
from retrostate.multiport import ColumnSpec, check_unitary, complete_unitary, dft_unitary
from retrostate.optimize import objective, optimize_grid, optimize_lagrange, optimize_n1
from retrostate.rootcore import RootSet, TargetState, char_polynomial, find_roots

from conftest import SEED, haar_with_floor, random_coeffs, random_roots

pytestmark = pytest.mark.acceptance

SQ2 = np.sqrt(2)


@pytest.fixture
def report(capsys):
    def _report(number, ok, elapsed, limit, detail):
        ok = bool(ok) and elapsed < limit
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail} ({elapsed:.2f} s, limit {limit:g} s)")
        return ok

    return _report


class Checks:
    """Collects named comparisons so a criterion reports every failure at once."""

    def __init__(self):
        self.failed = []

    def near(self, name, value, expected, tol):
        if not abs(value - expected) <= tol:
            self.failed.append(f"{name}={value!r} expected {expected!r} +/- {tol:g}")

    def true(self, name, cond):
        if not cond:
            self.failed.append(name)

    @property
    def ok(self):
        return not self.failed


def _optimized_unitary(x):
    return complete_unitary([ColumnSpec(0, np.sqrt(x).astype(complex))])


def test_criterion_1_n1_dft(report):
    t0 = time.perf_counter()
    c = Checks()
    plan = make_plan(TargetState([1, 1]), dft_unitary(2))
    c.near("beta1", plan.betas[0], -1.0, 1e-9)
    c.near("|kbar|^2", plan.success, 0.1839, 5e-4)
    c.near("ratio %", 100 * plan.ratio, 36.8, 0.5)
    ok = report(1, c.ok, time.perf_counter() - t0, 1.0,
                f"beta1={plan.betas[0].real:.12f}, |kbar|^2={plan.success:.5f}, ratio={100 * plan.ratio:.2f}%")
    assert ok, c.failed


def test_criterion_2_n1_optimized(report):
    t0 = time.perf_counter()
    c = Checks()
    target = TargetState([1, 1])
    res = optimize_n1(find_roots(char_polynomial(target)).g[0])
    plan = make_plan(target, _optimized_unitary(res.weights.x))
    c.near("|U00|^2", res.weights.x[0], 0.618, 1e-3)
    c.near("|kbar|^2", plan.success, 0.206, 5e-4)
    c.near("|beta1|", abs(plan.betas[0]), 0.786, 5e-4)
    c.near("ratio %", 100 * plan.ratio, 41.0, 0.5)
    ok = report(2, c.ok, time.perf_counter() - t0, 1.0,
                f"|U00|^2={res.weights.x[0]:.5f}, |kbar|^2={plan.success:.5f}, "
                f"|beta1|={abs(plan.betas[0]):.5f}, ratio={100 * plan.ratio:.2f}%")
    assert ok, c.failed


def test_criterion_3_n2_dft(report):
    t0 = time.perf_counter()
    c = Checks()
    plan = make_plan(TargetState([1, 1, 1]), dft_unitary(3))
    g1 = -1 / SQ2 - 1j * np.sqrt(SQ2 - 0.5)
    g = sorted(plan.roots.g, key=lambda z: z.imag)
    c.near("g1", g[0], g1, 1e-9)
    c.near("g2", g[1], np.conj(g1), 1e-9)
    c.near("beta1", plan.betas[0], -1.259, 5e-4)
    c.near("beta2", plan.betas[1], -0.155, 5e-4)
    c.near("|kbar|^2", plan.success, 0.022, 5e-4)
    c.near("ratio %", 100 * plan.ratio, 13.3, 0.2)
    ok = report(3, c.ok, time.perf_counter() - t0, 1.0,
                f"g1={g[0]:.10f}, beta=({plan.betas[0].real:.4f}, {plan.betas[1].real:.4f}), "
                f"|kbar|^2={plan.success:.5f}, ratio={100 * plan.ratio:.2f}%")
    assert ok, c.failed


def test_criterion_4_n2_optimized(report):
    t0 = time.perf_counter()
    c = Checks()
    target = TargetState([1, 1, 1])
    res = optimize_lagrange(find_roots(char_polynomial(target)))
    x = res.weights.x
    U = _optimized_unitary(x)
    multi = make_plan(target, U)
    single = make_plan(target, U, PlanMode.SINGLE)
    for name, v, e in zip(("x0", "x1", "x2"), x, (0.436, 0.282, 0.282)):
        c.near(name, v, e, 1e-3)
    c.near("|kbar|^2", multi.success, 0.0248, 2e-4)
    c.near("ratio %", 100 * multi.ratio, 14.9, 0.2)
    c.near("sum|beta|^2", multi.total_drive, 1.162, 2e-3)
    col0 = single.unitary.entries[:, 0]
    col1 = single.unitary.entries[:, 1]
    w1 = np.abs(col1) ** 2
    c.near("|beta1| single", abs(single.betas[0]), 1.078, 2e-3)
    c.near("|U01|^2", w1[0], 0.314, 2e-3)
    c.near("|U11|^2", w1[1], 0.343, 2e-3)
    c.near("|U21|^2", w1[2], 0.343, 2e-3)
    # second column normalized and orthogonal to the first
    norm_res = abs(np.sum(w1) - 1)
    orth_res = abs(np.vdot(col0, col1))
    c.true("column-1 normalization residual <= 1e-9", norm_res <= 1e-9)
    c.true("column orthogonality residual <= 1e-9", orth_res <= 1e-9)
    c.true("completed matrix unitary", check_unitary(single.unitary, 1e-9)[0])
    ok = report(4, c.ok, time.perf_counter() - t0, 5.0,
                f"x=({x[0]:.4f}, {x[1]:.4f}, {x[2]:.4f}), |kbar|^2={multi.success:.5f}, "
                f"ratio={100 * multi.ratio:.2f}%, sum|beta|^2={multi.total_drive:.4f}, "
                f"|beta1|={abs(single.betas[0]):.4f}, |U_n1|^2=({w1[0]:.4f}, {w1[1]:.4f}, {w1[2]:.4f}), "
                f"residuals {norm_res:.1e}/{orth_res:.1e}")
    assert ok, c.failed


def test_criterion_5_oracle_equivalence(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    worst_fid, worst_high, runs = 1.0, 0.0, 0
    for i in range(50):
        N = 1 + i % 4
        target = TargetState(random_coeffs(rng, N))
        roots = find_roots(char_polynomial(target))
        res = optimize_lagrange(roots)
        for U in (dft_unitary(N + 1), _optimized_unitary(res.weights.x)):
            plan = make_plan(target, U)
            oracle = retrodictive_state_oracle(plan.unitary, plan.betas, N + 2)
            worst_fid = min(worst_fid, overlap(oracle, plan.state()))
            worst_high = max(worst_high, float(np.max(np.abs(oracle[N + 1:]))))
            runs += 1
    ok = report(5, worst_fid >= 1 - 1e-7 and worst_high <= 1e-8, time.perf_counter() - t0, 60.0,
                f"{runs} oracle runs, min overlap 1-{1 - worst_fid:.1e}, max |coeff| above N {worst_high:.1e}")
    assert ok


def test_criterion_6_inverse_and_routes(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 6)
    round_trip = route = single = 0.0
    for i in range(100):
        N = 1 + i % 5
        U = haar_with_floor(rng, N + 1)
        g = random_roots(rng, N)
        b = betas_from_roots(U, RootSet(g))
        round_trip = max(round_trip, float(np.max(np.abs(roots_from_betas(U, b).g - g))))
        route = max(route, abs(abs(kbar(U, b)) ** 2 - success_metric(U, RootSet(g))))

        target = TargetState(random_coeffs(rng, N))
        multi = make_plan(target, U)
        one = make_plan(target, U, PlanMode.SINGLE, phase=rng.uniform(0, 2 * np.pi))
        single = max(single, abs(one.success - multi.success), 1 - overlap(one.shape(), multi.shape()))
    ok = report(6, max(round_trip, route, single) <= 1e-9, time.perf_counter() - t0, 10.0,
                f"100 instances each: round trip {round_trip:.1e}, |kbar|^2 routes {route:.1e}, "
                f"single vs multi {single:.1e}")
    assert ok


def _fd_residual(x, g, h=1e-6):
    grad = np.array([(objective(x + h * e, g) - objective(x - h * e, g)) / (2 * h) for e in np.eye(x.size)])
    return float(np.max(np.abs(grad - grad.mean())))


def test_criterion_7_optimizer_cross_validation(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 7)
    gap = fd = 0.0
    interior = total = 0
    for N in (1, 2, 3):
        for _ in range(20):
            roots = RootSet(random_roots(rng, N))
            a = optimize_lagrange(roots)
            b = optimize_grid(roots)
            gap = max(gap, abs(a.value - b.value))
            total += 1
            if not a.boundary:
                interior += 1
                fd = max(fd, _fd_residual(a.weights.x, roots.g))
    ok = report(7, gap <= 1e-5 and fd <= 1e-5, time.perf_counter() - t0, 120.0,
                f"{total} root sets, max |Lagrange - grid| {gap:.1e}, "
                f"max finite-difference residual {fd:.1e} over {interior} interior optima")
    assert ok


def test_criterion_8_permanents(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED + 8)
    worst = 0.0
    for i in range(100):
        n = 1 + i % 6
        M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ref = permanent_naive(M)
        worst = max(worst, abs(permanent(M) - ref) / abs(ref))
    hom = abs(fock_amplitude(dft_unitary(2), (1, 1), (1, 1)))
    ok = report(8, worst <= 1e-10 and hom <= 1e-12, time.perf_counter() - t0, 5.0,
                f"100 matrices, max relative error {worst:.1e}, HOM amplitude {hom:.1e}")
    assert ok
