"""Coherent-input configuration that produces a target retrodictive state.

With coherent states ``beta_1 .. beta_N`` in input ports ``1..N``, vacuum-free
port 0, and the click pattern ``(0, 1, ..., 1)`` at the outputs, the state
retrodicted into port 0 is

    kbar * prod_n (a^dagger - g_n) |0>,
    g_n  = -(1 / U[n,0]^*) sum_m U[n,m]^* beta_m^*,
    kbar = exp(-sum|beta|^2 / 2) prod_{n>=1} U[n,0]^*.

This module inverts that map: given the roots of the target it returns the
``beta_m`` and the success weight ``|kbar|^2``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import rootcore
from .errors import Beta0NotZero, MismatchedDegree, ZeroBeta, ZeroColumnEntry, ZeroFirstColumnElement
from .multiport import ColumnSpec, MultiportUnitary, complete_unitary
from .rootcore import RootSet, TargetState

G0_COLUMN_TOL = 1e-12
PLAN_COLUMN_TOL = 1e-6
BETA0_TOL = 1e-9
FIDELITY_TOL = 1e-8
ZERO_BETA_TOL = 1e-14


class PlanMode(str, enum.Enum):
    MULTI = "multi"
    SINGLE = "single"


@dataclass(frozen=True)
class DetectionPattern:
    """Photocounts at outputs ``0..N``."""

    counts: Tuple[int, ...]

    @classmethod
    def canonical(cls, N: int) -> "DetectionPattern":
        return cls((0,) + (1,) * N)

    @property
    def total(self) -> int:
        return sum(self.counts)

    @property
    def is_canonical(self) -> bool:
        return self.counts[0] == 0 and all(c == 1 for c in self.counts[1:])


def overlap(a, b) -> float:
    """Phase-insensitive squared overlap ``|<a|b>|^2 / (<a|a><b|b>)``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = max(a.size, b.size)
    a = np.pad(a, (0, n - a.size))
    b = np.pad(b, (0, n - b.size))
    if not (np.any(a) and np.any(b)):
        raise ValueError("overlap of a zero vector is undefined")
    # rescale first so tiny amplitudes (large coherent drives) do not underflow
    a = a / np.max(np.abs(a))
    b = b / np.max(np.abs(b))
    return float(abs(np.vdot(a, b)) ** 2 / (np.vdot(a, a).real * np.vdot(b, b).real))


def _check_first_column(col: np.ndarray, tol: float) -> None:
    small = np.flatnonzero(np.abs(col) < tol)
    if small.size:
        raise ZeroFirstColumnElement(
            f"|U[n,0]| < {tol:g} for rows {small.tolist()}; every first-column element must be nonzero"
        )


def _g0_from_weights(x: np.ndarray, g: np.ndarray) -> complex:
    return complex(-np.dot(x[1:], g) / x[0])


def derive_g0(U: MultiportUnitary, roots: RootSet) -> complex:
    """``g0 = -(1/|U00|^2) sum_{n>=1} |U_n0|^2 g_n``, the value that forces ``beta_0 = 0``."""
    col = U.first_column
    if abs(col[0]) < G0_COLUMN_TOL:
        raise ZeroFirstColumnElement(f"|U00| = {abs(col[0]):.3g}")
    if roots.N != U.dim - 1:
        raise MismatchedDegree(f"{roots.N} roots for a {U.dim}-mode multiport")
    return _g0_from_weights(np.abs(col) ** 2, roots.g)


def betas_from_roots(U: MultiportUnitary, roots: RootSet) -> np.ndarray:
    """Coherent amplitudes ``beta_1 .. beta_N`` for the given roots.

    ``g0`` is derived if the root set does not carry one. The amplitude for
    port 0 that falls out of the inversion must vanish; anything else means
    ``g0`` is inconsistent with ``U``.
    """
    col = U.first_column
    _check_first_column(col, G0_COLUMN_TOL)
    if roots.g0 is None:
        roots = roots.with_g0(derive_g0(U, roots))
    g = roots.full
    # beta_m^* = -sum_n U[n,m] U[n,0]^* g_n
    beta_conj = -(U.entries * (col.conj() * g)[:, None]).sum(axis=0)
    scale = max(1.0, float(np.max(np.abs(g))))
    if abs(beta_conj[0]) > BETA0_TOL * scale:
        raise Beta0NotZero(f"|beta_0| = {abs(beta_conj[0]):.3g}; g0 does not match this multiport")
    return beta_conj[1:].conj()


def roots_from_betas(U: MultiportUnitary, betas) -> RootSet:
    """Inverse of :func:`betas_from_roots`; ``g`` is returned in row order, unsorted."""
    col = U.first_column
    _check_first_column(col, G0_COLUMN_TOL)
    b = np.concatenate([[0j], np.asarray(betas, dtype=complex)])
    g = -(U.entries.conj() @ b.conj()) / col.conj()
    return RootSet(g[1:], g0=complex(g[0]))


def kbar(U: MultiportUnitary, betas) -> complex:
    b = np.asarray(betas, dtype=complex)
    return complex(np.exp(-0.5 * np.sum(np.abs(b) ** 2)) * np.prod(U.first_column[1:].conj()))


def success_metric(U: MultiportUnitary, roots: RootSet) -> float:
    """``|kbar|^2`` evaluated from the roots, without computing the amplitudes."""
    x = np.abs(U.first_column) ** 2
    g0 = roots.g0 if roots.g0 is not None else derive_g0(U, roots)
    g = np.concatenate([[g0], roots.g])
    return float(np.exp(-np.dot(x, np.abs(g) ** 2)) * np.prod(x[1:]))


def engineered_shape(U: MultiportUnitary, betas) -> np.ndarray:
    """Number-state coefficients of the retrodicted state without the vacuum-overlap factor.

    Multiplies out ``prod_n (U[n,0]^* a^dagger + sum_m U[n,m]^* beta_m^*)``
    as a polynomial in ``a^dagger``. Unlike :func:`engineered_state` this
    never underflows for large drives.
    """
    b = np.concatenate([[0j], np.asarray(betas, dtype=complex)])
    Uc = U.entries.conj()
    N = U.dim - 1
    poly = np.array([1.0 + 0j])
    for n in range(1, N + 1):
        const = np.dot(Uc[n, 1:], b[1:].conj())
        # poly * (const + Uc[n,0] x), lowest order first
        poly = np.concatenate([poly * const, [0j]]) + np.concatenate([[0j], poly * Uc[n, 0]])
    return poly * rootcore.sqrt_factorials(N)


def engineered_state(U: MultiportUnitary, betas) -> np.ndarray:
    """Unnormalized number-state coefficients of the retrodicted port-0 state.

    :func:`engineered_shape` scaled by the vacuum overlaps
    ``exp(-sum |beta|^2 / 2)`` of the coherent inputs.
    """
    b = np.asarray(betas, dtype=complex)
    return np.exp(-0.5 * np.sum(np.abs(b) ** 2)) * engineered_shape(U, b)


def single_input_reduction(
    column0: ColumnSpec, roots: RootSet, phase: float = 0.0
) -> Tuple[complex, ColumnSpec]:
    """Second column and amplitude for driving only input port 1.

    With ``beta_m = 0`` for ``m >= 2`` the second column must be
    ``U[n,1] = -g_n^* U[n,0] / beta_1``. Unitarity then fixes
    ``|beta_1|^2 = sum_m |U[m,0]|^2 |g_m|^2``; the phase of ``beta_1`` is free.
    """
    col = column0.entries
    small = np.flatnonzero(np.abs(col) < G0_COLUMN_TOL)
    if small.size:
        raise ZeroColumnEntry(f"first column vanishes at rows {small.tolist()}")
    x = np.abs(col) ** 2
    g0 = roots.g0 if roots.g0 is not None else _g0_from_weights(x, roots.g)
    g = np.concatenate([[g0], roots.g])
    drive = float(np.dot(x, np.abs(g) ** 2))
    if drive < ZERO_BETA_TOL:
        raise ZeroBeta("target needs no coherent drive; use the all-vacuum configuration")
    beta1 = np.sqrt(drive) * np.exp(1j * phase)
    return complex(beta1), ColumnSpec(1, -g.conj() * col / beta1)


@dataclass(frozen=True)
class EngineeringPlan:
    target: TargetState
    unitary: MultiportUnitary
    roots: RootSet
    betas: np.ndarray
    kbar: complex
    success: float
    mode: PlanMode = PlanMode.MULTI
    phase: float = 0.0

    @property
    def N(self) -> int:
        return self.target.N

    @property
    def k2(self) -> float:
        """Squared normalizing constant of the factorized target."""
        return abs(self.roots.k) ** 2

    @property
    def ratio(self) -> float:
        """``|kbar|^2 / k^2``: success relative to a normalized target projector."""
        return self.success / self.k2

    @property
    def total_drive(self) -> float:
        return float(np.sum(np.abs(self.betas) ** 2))

    def state(self) -> np.ndarray:
        return engineered_state(self.unitary, self.betas)

    def shape(self) -> np.ndarray:
        """:meth:`state` without the vacuum factor; safe for very large drives."""
        return engineered_shape(self.unitary, self.betas)

    def fidelity(self) -> float:
        return overlap(self.shape(), self.target.coeffs)


def _vacuum_betas(N: int) -> np.ndarray:
    return np.zeros(N, dtype=complex)


def make_plan(
    target: TargetState,
    U: MultiportUnitary,
    mode: PlanMode | str = PlanMode.MULTI,
    phase: float = 0.0,
) -> EngineeringPlan:
    """Roots, amplitudes and success weight for ``target`` on multiport ``U``.

    In ``single`` mode only the first column of ``U`` is kept; the second
    column is rebuilt so that one coherent input suffices, and the rest of the
    matrix is completed by Gram-Schmidt.
    """
    mode = PlanMode(mode)
    if U.dim != target.N + 1:
        raise MismatchedDegree(
            f"a degree-{target.N} target needs a {target.N + 1}-mode multiport, got {U.dim}"
        )
    _check_first_column(U.first_column, PLAN_COLUMN_TOL)

    poly = rootcore.char_polynomial(target)
    roots = rootcore.find_roots(poly)
    k, _ = rootcore.expand_roots(roots, target)
    roots = roots.with_k(k).with_g0(derive_g0(U, roots))

    if mode is PlanMode.MULTI:
        betas = betas_from_roots(U, roots)
    else:
        try:
            beta1, col1 = single_input_reduction(U.column(0), roots, phase)
        except ZeroBeta:
            betas = _vacuum_betas(target.N)
        else:
            U = complete_unitary([U.column(0), col1])
            betas = _vacuum_betas(target.N)
            betas[0] = beta1

    kb = kbar(U, betas)
    success = abs(kb) ** 2
    plan = EngineeringPlan(target, U, roots, betas, kb, success, mode, phase)

    fid = plan.fidelity()
    if fid < 1.0 - FIDELITY_TOL:
        raise ArithmeticError(f"engineered state overlap {fid:.12f} misses the target")
    return plan
