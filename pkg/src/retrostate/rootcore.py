"""Number-state <-> root representation of a finite photon-number superposition.

A target ``sum_n c_n |n>`` is rewritten as ``k * prod_n (a^dagger - g_n) |0>``.
The ``g_n`` are the roots of ``sum_n c_n x^n / sqrt(n!)``, and ``k`` is that
polynomial's leading coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateLeadingCoefficient, MismatchedDegree

LEADING_TOL = 1e-14
MULTIPLICITY_TOL = 1e-8


def sqrt_factorials(n_max: int) -> np.ndarray:
    return np.sqrt(np.array([float(factorial(n)) for n in range(n_max + 1)]))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class TargetState:
    """Normalized photon-number coefficients ``c_0 .. c_N``.

    Coefficients are normalized on construction. The last coefficient must be
    nonzero so that ``N`` is the exact degree.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).ravel()
        if c.size < 2:
            raise DegenerateLeadingCoefficient(
                "target must contain at least |0> and |1> (N >= 1)"
            )
        norm = np.linalg.norm(c)
        if norm == 0 or not np.all(np.isfinite(c)):
            raise ValueError("target coefficients must be finite and not all zero")
        c = c / norm
        if abs(c[-1]) < LEADING_TOL:
            raise DegenerateLeadingCoefficient(
                f"c_N is zero for N={c.size - 1}; restate the target at lower N"
            )
        object.__setattr__(self, "coeffs", _frozen(c))

    @property
    def N(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.coeffs.imag == 0))


@dataclass(frozen=True)
class CharPolynomial:
    """Monomial coefficients ``p_n = c_n / sqrt(n!)``, lowest order first."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frozen(np.asarray(self.coeffs).ravel()))

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    def __call__(self, x):
        # np.polyval wants highest order first
        return np.polyval(self.coeffs[::-1], x)

    def derivative(self, x):
        n = np.arange(1, self.coeffs.size)
        return np.polyval((n * self.coeffs[1:])[::-1], x)


@dataclass(frozen=True)
class RootSet:
    """Roots ``g_1 .. g_N`` plus the derived ``g0`` and normalization ``k``.

    ``g0`` is filled in by :func:`retrostate.engineer.derive_g0` and ``k`` by
    :func:`expand_roots`; both stay ``None`` until then.
    """

    g: np.ndarray
    g0: Optional[complex] = None
    k: Optional[complex] = None
    multiplicity_detected: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "g", _frozen(np.asarray(self.g).ravel()))

    @property
    def N(self) -> int:
        return self.g.size

    def with_g0(self, g0: complex) -> "RootSet":
        return RootSet(self.g, complex(g0), self.k, self.multiplicity_detected)

    def with_k(self, k: complex) -> "RootSet":
        return RootSet(self.g, self.g0, complex(k), self.multiplicity_detected)

    @property
    def full(self) -> np.ndarray:
        """``(g0, g1, ..., gN)``; requires ``g0`` to be set."""
        if self.g0 is None:
            raise ValueError("g0 has not been derived for this root set")
        return np.concatenate([[self.g0], self.g])


def char_polynomial(state: TargetState) -> CharPolynomial:
    return CharPolynomial(state.coeffs / sqrt_factorials(state.N))


def _sort_roots(g: np.ndarray) -> np.ndarray:
    # rounding the real part keeps conjugate pairs in (re, im) order despite
    # last-bit noise between them
    order = sorted(range(g.size), key=lambda i: (round(g[i].real, 10), g[i].imag))
    return g[order]


def find_roots(poly: CharPolynomial) -> RootSet:
    """Roots of the characteristic polynomial.

    Eigenvalues of the companion matrix (LAPACK balances before the QR
    iteration), followed by one Newton step per root. A root where the
    derivative nearly vanishes is treated as repeated and left unpolished.

    Raises
    ------
    DegenerateLeadingCoefficient
        If ``|p_N| < 1e-14``.
    """
    p = poly.coeffs
    N = poly.degree
    if N < 1 or abs(p[-1]) < LEADING_TOL:
        raise DegenerateLeadingCoefficient(
            f"leading coefficient |p_N| = {abs(p[-1]):.3g} is below {LEADING_TOL}"
        )
    real = bool(np.all(p.imag == 0))
    monic = (p[:-1] / p[-1]).real if real else p[:-1] / p[-1]
    companion = np.zeros((N, N), dtype=monic.dtype)
    companion[1:, :-1] = np.eye(N - 1)
    companion[:, -1] = -monic
    g = np.linalg.eigvals(companion).astype(complex)

    repeated = False
    for i in range(N):
        d = poly.derivative(g[i])
        if abs(d) < MULTIPLICITY_TOL:
            repeated = True
            continue
        step = g[i] - poly(g[i]) / d
        if abs(poly(step)) <= abs(poly(g[i])):
            g[i] = step
    return RootSet(_sort_roots(g), multiplicity_detected=repeated)


def residual_tolerance(poly: CharPolynomial, roots: RootSet) -> np.ndarray:
    """Allowed ``|p(g_n)|`` for each computed root.

    ``1e-9 * max|p_n|``, widened to ``1e-9 * sum_n |p_n| |g|^n`` for roots
    outside the unit disk, where rounding in the evaluation alone exceeds the
    unscaled bound. Repeated roots get 1e-6 instead of 1e-9.
    """
    rel = 1e-6 if roots.multiplicity_detected else 1e-9
    powers = np.abs(roots.g)[:, None] ** np.arange(poly.coeffs.size)
    scale = np.maximum(np.max(np.abs(poly.coeffs)), powers @ np.abs(poly.coeffs))
    return rel * scale


def monomials_from_roots(g: Sequence[complex]) -> np.ndarray:
    """Coefficients of ``prod_n (x - g_n)``, lowest order first."""
    out = np.array([1.0 + 0j])
    for root in g:
        # multiply by (x - root)
        out = np.concatenate([[0j], out]) - root * np.concatenate([out, [0j]])
    return out


def expand_roots(roots: RootSet, target: TargetState):
    """Re-expand a root set into number-state coefficients.

    ``k`` is the complex scale that best matches the target in least squares;
    for exact roots it is the leading coefficient ``c_N / sqrt(N!)``.

    Returns
    -------
    k : complex
    coeffs : ndarray
        ``k * prod(a^dagger - g_n)|0>`` in the number basis.
    """
    if roots.N != target.N:
        raise MismatchedDegree(f"{roots.N} roots supplied for a degree-{target.N} target")
    shape = monomials_from_roots(roots.g) * sqrt_factorials(target.N)
    k = np.vdot(shape, target.coeffs) / np.vdot(shape, shape)
    return complex(k), k * shape
