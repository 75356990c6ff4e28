"""Maximize the success weight ``|kbar|^2`` over the first-column moduli.

With ``x_n = |U[n,0]|^2`` on the simplex, the success weight is

    F(x) = exp(-sum_m x_m |g_m(x)|^2) * prod_{n>=1} x_n,
    g_0(x) = -(1/x_0) sum_{n>=1} x_n g_n.

``log F = sum log x_n - sum x_n |g_n|^2 - |sum x_n g_n|^2 / x_0`` is concave
on the open simplex, so an interior stationary point is the global maximum.
When ``sum x_n g_n`` can vanish the supremum sits on the face ``x_0 -> 0``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionTooLarge, NotConverged
from .rootcore import RootSet

FLOOR = 1e-8
WEIGHT_TOL = 1e-10
STATIONARITY_TOL = 1e-9
MAX_NEWTON_ITER = 500
MAX_HALVINGS = 30
GOLDEN_TOL = 1e-10
GRID_MAX_N = 3


class Method(str, enum.Enum):
    CLOSED_FORM_N1 = "closed-form-n1"
    LAGRANGE = "lagrange"
    PROJECTED_GRADIENT = "projected-gradient"
    GRID = "grid"


@dataclass(frozen=True)
class ColumnWeights:
    """Squared moduli ``x_n = |U[n,0]|^2`` of a first column; sums to one."""

    x: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float).ravel()
        if abs(x.sum() - 1.0) > WEIGHT_TOL:
            raise ValueError(f"weights sum to {x.sum():.12g}, not 1")
        if np.any(x <= 0):
            raise ValueError("every weight must be strictly positive")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    @classmethod
    def uniform(cls, N: int) -> "ColumnWeights":
        return cls(np.full(N + 1, 1.0 / (N + 1)))

    def column(self, phases=None) -> np.ndarray:
        """First column with the given phases (all zero by default)."""
        amp = np.sqrt(self.x)
        if phases is None:
            return amp.astype(complex)
        return amp * np.exp(1j * np.asarray(phases, dtype=float))


@dataclass(frozen=True)
class OptimizationResult:
    weights: ColumnWeights
    value: float
    method: Method
    iterations: int
    converged: bool
    boundary: bool = False
    multiplier: Optional[float] = field(default=None, compare=False)
    residual: Optional[float] = field(default=None, compare=False)


def _as_array(x) -> np.ndarray:
    return np.asarray(x.x if isinstance(x, ColumnWeights) else x, dtype=float)


def log_objective(x, g) -> np.ndarray:
    """``log F`` for one weight vector or a stack of them (last axis = modes)."""
    x = _as_array(x)
    g = np.asarray(g, dtype=complex)
    s = x[..., 1:] @ g
    return (
        np.sum(np.log(x[..., 1:]), axis=-1)
        - x[..., 1:] @ (np.abs(g) ** 2)
        - np.abs(s) ** 2 / x[..., 0]
    )


def objective(x, roots) -> float:
    """Success weight as a function of the first-column moduli.

    ``x`` may be :class:`ColumnWeights` or any positive array; it is not
    renormalized, which lets finite differences probe off the simplex.
    """
    g = roots.g if isinstance(roots, RootSet) else roots
    x = _as_array(x)
    g = np.asarray(g, dtype=complex)
    g0 = -np.dot(x[1:], g) / x[0]
    full = np.concatenate([[g0], g])
    return float(np.exp(-np.dot(x, np.abs(full) ** 2)) * np.prod(x[1:]))


def _log_grad_hess(x: np.ndarray, g: np.ndarray):
    a, b = g.real, g.imag
    s = np.dot(x[1:], g)
    x0 = x[0]
    n = x.size
    grad = np.empty(n)
    grad[0] = abs(s) ** 2 / x0**2
    proj = s.real * a + s.imag * b
    grad[1:] = 1.0 / x[1:] - np.abs(g) ** 2 - 2.0 * proj / x0

    H = np.zeros((n, n))
    H[0, 0] = -2.0 * abs(s) ** 2 / x0**3
    H[0, 1:] = H[1:, 0] = 2.0 * proj / x0**2
    H[1:, 1:] = -2.0 * (np.outer(a, a) + np.outer(b, b)) / x0 - np.diag(1.0 / x[1:] ** 2)
    return grad, H


def objective_gradient(x, roots) -> np.ndarray:
    """Analytic gradient of :func:`objective` with respect to every ``x_n``."""
    g = np.asarray(roots.g if isinstance(roots, RootSet) else roots, dtype=complex)
    x = _as_array(x)
    grad, _ = _log_grad_hess(x, g)
    return objective(x, g) * grad


def stationarity_residual(x, roots):
    """``max_n |dF/dx_n + lambda|`` with the least-squares multiplier."""
    grad = objective_gradient(x, roots)
    lam = -float(np.mean(grad))
    return float(np.max(np.abs(grad + lam))), lam


def _result(x, g, method, iterations, converged, boundary=False) -> OptimizationResult:
    x = np.asarray(x, dtype=float)
    x = x / x.sum()
    w = ColumnWeights(x)
    res, lam = stationarity_residual(w.x, g)
    return OptimizationResult(
        w, objective(w.x, g), Method(method), iterations, converged and not boundary,
        boundary, lam, res,
    )


def _at_floor(x: np.ndarray) -> bool:
    return bool(np.min(x) <= 10 * FLOOR)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = GOLDEN_TOL):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(argmax, iterations)``."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol:
        it += 1
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2.0, it


def optimize_n1(g1: complex) -> OptimizationResult:
    """Two-mode case: a one-variable maximization over ``x_0 = |U00|^2``.

    The success weight reduces to ``x_1 exp(-x_1 |g1|^2 - x_1^2 |g1|^2 / x_0)``
    with ``x_1 = 1 - x_0``; it is log-concave, so golden-section search on
    ``x_0`` brackets the unique maximum.
    """
    g1 = complex(g1)
    a = abs(g1) ** 2
    if a == 0:
        raise ValueError("g1 = 0 needs no coherent drive; the supremum is at x0 -> 0")

    def logf(x0):
        x1 = 1.0 - x0
        return np.log(x1) - a * x1 - a * x1**2 / x0

    x0, it = golden_section(logf, FLOOR, 1.0 - FLOOR)
    return _result([x0, 1.0 - x0], [g1], Method.CLOSED_FORM_N1, it, True, _at_floor(np.array([x0, 1 - x0])))


def _simplex_step_limit(x: np.ndarray, d: np.ndarray) -> float:
    neg = d < -1e-300
    if not np.any(neg):
        return 1.0
    return float(min(1.0, np.min((x[neg] - FLOOR) / -d[neg])))


def _newton_direction(grad: np.ndarray, H: np.ndarray, free: np.ndarray) -> np.ndarray:
    """Newton step for the free coordinates with the sum constraint kept."""
    idx = np.flatnonzero(free)
    m = idx.size
    K = np.zeros((m + 1, m + 1))
    K[:m, :m] = H[np.ix_(idx, idx)]
    K[:m, m] = K[m, :m] = 1.0
    rhs = np.concatenate([-grad[idx], [0.0]])
    try:
        sol = np.linalg.solve(K, rhs)
    except np.linalg.LinAlgError:
        sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    d = np.zeros(grad.size)
    d[idx] = sol[:m]
    return d


def optimize_lagrange(
    roots: RootSet, initial: Optional[ColumnWeights] = None, max_iter: int = MAX_NEWTON_ITER
) -> OptimizationResult:
    """Solve ``dF/dx_n + lambda = 0``, ``sum x_n = 1`` by damped Newton.

    The iteration runs on ``log F``; its stationary points coincide with
    those of ``F`` and the concave log form keeps the Newton steps well
    scaled. Steps are halved (at most 30 times) until ``log F`` increases.
    The returned residual is measured on the original system.

    Raises
    ------
    NotConverged
        If an interior point is not reached within ``max_iter`` iterations.
    """
    g = np.asarray(roots.g, dtype=complex)
    n = g.size + 1
    x = (initial.x if initial is not None else ColumnWeights.uniform(n - 1).x).copy()
    L = log_objective(x, g)
    for it in range(1, max_iter + 1):
        grad, H = _log_grad_hess(x, g)
        # weights parked on the floor stay there unless the gradient pulls them up
        free = x > FLOOR * (1.0 + 1e-9)
        if not free.all():
            free |= grad > np.mean(grad[free])
        at_floor = ~(x > FLOOR * (1.0 + 1e-9))
        while True:
            d = _newton_direction(grad, H, free)
            # a floor weight the step would push lower is pinned and the step redone
            blocked = free & at_floor & (d < 0)
            if not blocked.any():
                break
            free &= ~blocked
        idx = np.flatnonzero(free)
        alpha = _simplex_step_limit(x, d)
        for _ in range(MAX_HALVINGS):
            trial = np.maximum(x + alpha * d, FLOOR)
            Lt = log_objective(trial, g)
            if Lt >= L - 1e-15 * abs(L):
                break
            alpha /= 2.0
        else:
            trial, Lt = x, L
        step = np.max(np.abs(trial - x))
        x, L = trial / trial.sum(), Lt
        if step < 1e-15 or np.ptp(grad[idx]) <= 1e-12 * max(1.0, np.max(np.abs(grad[idx]))) and free.all():
            break
    if _at_floor(x):
        return _result(x, g, Method.LAGRANGE, it, False, True)
    res, _ = stationarity_residual(x, g)
    if res <= STATIONARITY_TOL:
        return _result(x, g, Method.LAGRANGE, it, True)
    raise NotConverged(f"Lagrange iteration stalled after {it} steps (residual {res:.3g})")


def project_simplex(v: np.ndarray, floor: float = FLOOR) -> np.ndarray:
    """Euclidean projection onto ``{x : sum x = 1, x >= floor}``."""
    n = v.size
    w = v - floor
    budget = 1.0 - n * floor
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - budget
    rho = np.nonzero(u - css / np.arange(1, n + 1) > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(w - theta, 0.0) + floor


def optimize_projected_gradient(
    roots: RootSet,
    initial: Optional[ColumnWeights] = None,
    max_iter: int = 20000,
    tol: float = 1e-14,
) -> OptimizationResult:
    """Projected gradient ascent on ``log F`` with backtracking."""
    g = np.asarray(roots.g, dtype=complex)
    x = (initial.x if initial is not None else ColumnWeights.uniform(g.size).x).copy()
    L = log_objective(x, g)
    eta = 1e-2
    for it in range(1, max_iter + 1):
        grad, _ = _log_grad_hess(x, g)
        for _ in range(60):
            trial = project_simplex(x + eta * grad)
            Lt = log_objective(trial, g)
            # sufficient-increase test for projected steps
            if Lt >= L + 1e-4 * np.dot(grad, trial - x):
                break
            eta /= 2.0
        else:
            break
        step = np.max(np.abs(trial - x))
        x, L = trial, Lt
        eta *= 1.5
        if step < tol:
            break
    res, _ = stationarity_residual(x, g)
    boundary = _at_floor(x)
    # first-order method: accept a looser relative residual than Newton
    converged = boundary or res <= 1e-6 * objective(x, g)
    if not converged:
        raise NotConverged(f"projected gradient did not converge (residual {res:.3g})")
    return _result(x, g, Method.PROJECTED_GRADIENT, it, True, boundary)


def simplex_grid(N: int, resolution: int) -> np.ndarray:
    """Interior simplex points ``i / resolution`` with every ``i_n >= 1``."""
    pts = []
    for head in itertools.product(range(1, resolution), repeat=N):
        rest = resolution - sum(head)
        if rest >= 1:
            pts.append((rest,) + head)
    return np.array(pts, dtype=float) / resolution


def optimize_grid(
    roots: RootSet, resolution: Optional[int] = None, refine: bool = True
) -> OptimizationResult:
    """Brute-force maximization over a simplex grid, then local zooming.

    Only objective values are used; no derivatives. After the coarse grid a
    box of side ``4/resolution`` around the incumbent is resampled on an
    11-point-per-axis lattice; the box follows any improvement and shrinks by
    4 when the incumbent holds, until its half-width is below 1e-11.
    """
    g = np.asarray(roots.g, dtype=complex)
    N = g.size
    if N > GRID_MAX_N:
        raise DimensionTooLarge(f"grid search supports N <= {GRID_MAX_N}, got {N}")
    resolution = resolution or {1: 10000, 2: 300, 3: 80}[N]
    X = simplex_grid(N, resolution)
    vals = log_objective(X, g)
    best = X[np.argmax(vals)]
    best_val = np.max(vals)
    rounds = 0
    if refine:
        half = 2.0 / resolution
        offsets = np.array(list(itertools.product(np.linspace(-1, 1, 11), repeat=N)))
        while half > 1e-11 and rounds < 5000:
            rounds += 1
            tail = best[1:] + half * offsets
            cand = np.column_stack([1.0 - tail.sum(axis=1), tail])
            cand = cand[np.all(cand >= FLOOR, axis=1)]
            if cand.size:
                v = log_objective(cand, g)
                i = int(np.argmax(v))
                if v[i] > best_val:
                    best, best_val = cand[i], v[i]
                    continue
            half /= 4.0
    return _result(best, g, Method.GRID, X.shape[0] + rounds, True, _at_floor(best))


def optimize(roots: RootSet, method: str = "auto", initial: Optional[ColumnWeights] = None):
    """Dispatch to one optimizer; ``auto`` tries Lagrange, then projected gradient, then grid."""
    method = str(method)
    if method == "lagrange":
        return optimize_lagrange(roots, initial)
    if method == "grid":
        return optimize_grid(roots)
    if method == "projected-gradient":
        return optimize_projected_gradient(roots, initial)
    if method == "closed-form-n1":
        return optimize_n1(roots.g[0])
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    try:
        return optimize_lagrange(roots, initial)
    except NotConverged:
        pass
    try:
        return optimize_projected_gradient(roots, initial)
    except NotConverged:
        if roots.N <= GRID_MAX_N:
            return optimize_grid(roots)
        raise
