"""Brute-force multimode Fock-space simulation of a multiport.

Used as an independent check on :mod:`retrostate.engineer`: the retrodicted
state is rebuilt from forward transition amplitudes
``<0,1,...,1| R |q, beta_1, ..., beta_N>``, each a matrix permanent, with no
use of the closed-form product expansion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, sqrt
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from .errors import CutoffTooSmall, DimensionTooLarge, PhotonNumberMismatch
from .multiport import MultiportUnitary
from .rootcore import TargetState

MAX_PERMANENT_DIM = 20
DEFICIT_TOL = 1e-8
TAIL_TOL = 1e-12

Pattern = Tuple[int, ...]


# -- permanents -------------------------------------------------------------


def permanent(M) -> complex:
    """Permanent by Ryser's formula, visiting column subsets in Gray-code order.

    Each step flips one column in or out of the subset, so the row sums are
    updated in O(n) and the total cost is O(2^n n).
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {M.shape}")
    n = M.shape[0]
    if n > MAX_PERMANENT_DIM:
        raise DimensionTooLarge(f"permanent of a {n}x{n} matrix is out of range")
    if n == 0:
        return 1.0 + 0j
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    in_subset = np.zeros(n, dtype=bool)
    size = 0
    for k in range(1, 2**n):
        # the bit that changes between Gray codes k-1 and k
        j = (k & -k).bit_length() - 1
        if in_subset[j]:
            row_sums -= M[:, j]
            size -= 1
        else:
            row_sums += M[:, j]
            size += 1
        in_subset[j] = not in_subset[j]
        term = np.prod(row_sums)
        total += -term if size & 1 else term
    return complex(-total if n & 1 else total)


def permanent_naive(M) -> complex:
    """Sum over all permutations; O(n! n). Kept for cross-checking small cases."""
    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    rows = np.arange(n)
    return complex(sum(np.prod(M[rows, list(p)]) for p in itertools.permutations(range(n))))


# -- multimode number basis -------------------------------------------------


@lru_cache(maxsize=None)
def patterns(modes: int, total: int) -> Tuple[Pattern, ...]:
    """Occupation tuples of ``modes`` modes holding exactly ``total`` photons.

    Colexicographic order: the last mode varies slowest.
    """
    if modes == 1:
        return ((total,),)
    out = [
        head + (last,)
        for last in range(total + 1)
        for head in patterns(modes - 1, total - last)
    ]
    return tuple(out)


def fock_amplitude(U: MultiportUnitary, inpattern: Sequence[int], outpattern: Sequence[int]) -> complex:
    """``<out| R |in>`` for number-state patterns on the input and output ports."""
    M = U.entries if isinstance(U, MultiportUnitary) else np.asarray(U, dtype=complex)
    inp, out = tuple(inpattern), tuple(outpattern)
    if len(inp) != M.shape[1] or len(out) != M.shape[0]:
        raise ValueError(f"patterns {inp}, {out} do not match a {M.shape[0]}-mode device")
    if sum(inp) != sum(out):
        raise PhotonNumberMismatch(f"{sum(inp)} photons in, {sum(out)} out")
    rows = np.repeat(np.arange(len(out)), out)
    cols = np.repeat(np.arange(len(inp)), inp)
    norm = sqrt(np.prod([factorial(k) for k in inp + out], dtype=float))
    return permanent(M[np.ix_(rows, cols)]) / norm


def apply_unitary(U: MultiportUnitary, state: "FockVector") -> "FockVector":
    """Propagate a multimode state through the device, one photon-number sector at a time."""
    out: Dict[Pattern, complex] = {}
    for total in range(state.cutoff + 1):
        sector = dict(state.sector(total))
        if not sector:
            continue
        for o in patterns(U.dim, total):
            a = sum(amp * fock_amplitude(U, p, o) for p, amp in sector.items())
            if a != 0:
                out[o] = complex(a)
    return FockVector(U.dim, state.cutoff, out)


def transition_matrix(U: MultiportUnitary, total: int) -> np.ndarray:
    """All amplitudes within one photon-number sector; rows are outputs."""
    basis = patterns(U.dim, total)
    return np.array([[fock_amplitude(U, i, o) for i in basis] for o in basis])


@dataclass
class FockVector:
    """Sparse multimode state: occupation tuple -> amplitude, total photons <= cutoff."""

    modes: int
    cutoff: int
    amplitudes: Dict[Pattern, complex] = field(default_factory=dict)

    def __post_init__(self):
        for p in self.amplitudes:
            if len(p) != self.modes or sum(p) > self.cutoff or min(p) < 0:
                raise ValueError(f"pattern {p} outside {self.modes} modes / cutoff {self.cutoff}")

    @property
    def norm2(self) -> float:
        return float(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    @property
    def deficit(self) -> float:
        return max(0.0, 1.0 - self.norm2)

    def sector(self, total: int) -> Iterator[Tuple[Pattern, complex]]:
        for p, a in self.amplitudes.items():
            if sum(p) == total:
                yield p, a

    @classmethod
    def product(cls, factors: Sequence[Sequence[complex]], cutoff: int) -> "FockVector":
        """Tensor product of single-mode coefficient lists, truncated at ``cutoff`` photons."""
        amps: Dict[Pattern, complex] = {}
        for total in range(cutoff + 1):
            for p in patterns(len(factors), total):
                if all(k < len(f) for k, f in zip(p, factors)):
                    a = np.prod([f[k] for k, f in zip(p, factors)])
                    if a != 0:
                        amps[p] = complex(a)
        return cls(len(factors), cutoff, amps)


@dataclass(frozen=True)
class TruncationReport:
    cutoff: int
    deficit: float
    amplitude_bound: float

    def __post_init__(self):
        if self.deficit < 0:
            raise ValueError("negative truncation deficit")


# -- coherent inputs --------------------------------------------------------


def coherent_fock(beta: complex, cutoff: int):
    """Number-state coefficients of ``|beta>`` up to ``cutoff`` and the lost norm."""
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    beta = complex(beta)
    n = np.arange(cutoff + 1)
    logfact = np.cumsum(np.concatenate([[0.0], np.log(np.arange(1, cutoff + 1))]))
    # beta^n / sqrt(n!) via logs keeps large cutoffs finite
    mag = np.exp(-abs(beta) ** 2 / 2 + n * np.log(abs(beta)) - logfact / 2) if beta != 0 else (n == 0).astype(float)
    coeffs = mag * np.exp(1j * np.angle(beta) * n)
    deficit = float(stats.poisson.sf(cutoff, abs(beta) ** 2))
    return coeffs, deficit


def input_deficit(betas: Sequence[complex], photons: int) -> float:
    """Norm lost by keeping only coherent-input terms with at most ``photons`` photons in total.

    The photon numbers of independent coherent states are Poisson, and their
    sum is Poisson with mean ``sum |beta|^2``.
    """
    if photons < 0:
        return 1.0
    return float(stats.poisson.sf(photons, float(np.sum(np.abs(np.asarray(betas)) ** 2))))


def default_cutoff(betas: Sequence[complex], N: int, q_max: int) -> int:
    c = N + q_max
    while input_deficit(betas, c - q_max) >= TAIL_TOL:
        c += 1
    return c


def truncation_report(betas: Sequence[complex], cutoff: int, q_max: int) -> TruncationReport:
    deficit = input_deficit(betas, cutoff - q_max)
    return TruncationReport(cutoff, deficit, sqrt(deficit))


# -- oracle -----------------------------------------------------------------


def forward_amplitudes(
    U: MultiportUnitary, betas, q_max: int, cutoff: Optional[int] = None
) -> Tuple[np.ndarray, TruncationReport]:
    """``A_q = <0,1,...,1| R (|q>_0 x |beta_1> x ... x |beta_N>)`` for ``q = 0..q_max``."""
    betas = np.asarray(betas, dtype=complex)
    N = U.dim - 1
    if betas.size != N:
        raise ValueError(f"{betas.size} coherent amplitudes for {N} driven ports")
    if cutoff is None:
        cutoff = default_cutoff(betas, N, q_max)
    if cutoff < N + q_max:
        raise CutoffTooSmall(f"cutoff {cutoff} is below N + q_max = {N + q_max}")
    report = truncation_report(betas, cutoff, q_max)
    if report.deficit > DEFICIT_TOL:
        raise CutoffTooSmall(
            f"coherent inputs lose norm {report.deficit:.3g} at cutoff {cutoff}; raise the cutoff"
        )

    single = [coherent_fock(b, cutoff)[0] for b in betas]
    target = (0,) + (1,) * N
    A = np.zeros(q_max + 1, dtype=complex)
    for q in range(q_max + 1):
        # total photon number is conserved, so only the N-photon sector of
        # the input reaches the (0,1,...,1) pattern
        if q > N:
            continue
        for rest in patterns(N, N - q):
            amp = np.prod([single[m][k] for m, k in enumerate(rest)])
            if amp != 0:
                A[q] += amp * fock_amplitude(U, (q,) + rest, target)
    return A, report


def retrodictive_state_oracle(
    U: MultiportUnitary, betas, q_max: int, cutoff: Optional[int] = None
) -> np.ndarray:
    """Unnormalized port-0 state after the click pattern ``(0, 1, ..., 1)``.

    The coefficient of ``|q>`` is the complex conjugate of the forward
    amplitude for ``|q>`` entering port 0 alongside the coherent inputs.
    """
    A, _ = forward_amplitudes(U, betas, q_max, cutoff)
    return A.conj()


def detection_probability(
    U: MultiportUnitary, betas, probe, cutoff: Optional[int] = None
) -> float:
    """Probability of the click pattern ``(0, 1, ..., 1)`` with ``probe`` in port 0."""
    c = probe.coeffs if isinstance(probe, TargetState) else np.asarray(probe, dtype=complex)
    c = c / np.linalg.norm(c)
    A, _ = forward_amplitudes(U, betas, c.size - 1, cutoff)
    return float(abs(np.dot(c, A)) ** 2)
