"""Unitary matrices describing a lossless multiport.

Convention used throughout the package: ``U[n, m]`` couples input mode ``m``
(column) to output mode ``n`` (row), so a photon entering port ``m`` leaves as
``sum_n U[n, m] a_n^dagger``. Equivalently the backward (Heisenberg) map on
output creation operators carries the conjugated elements ``U[n, m]^*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import NotNormalized, NotOrthonormal, NotUnitary

UNITARY_TOL = 1e-10
COLUMN_TOL = 1e-10
ORTHONORMAL_TOL = 1e-8
DEPENDENT_TOL = 1e-8


def check_unitary(U, tol: float = UNITARY_TOL) -> Tuple[bool, float]:
    """Return ``(max|U^dagger U - I| <= tol, max|U^dagger U - I|)``."""
    M = U.entries if isinstance(U, MultiportUnitary) else np.asarray(U, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    dev = float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[0]))))
    return dev <= tol, dev


@dataclass(frozen=True)
class MultiportUnitary:
    """Square unitary matrix; rows are output modes, columns input modes."""

    entries: np.ndarray
    label: str = "custom"
    tol: float = field(default=UNITARY_TOL, repr=False, compare=False)

    def __post_init__(self):
        M = np.array(self.entries, dtype=complex)
        ok, dev = check_unitary(M, self.tol)
        if not ok:
            raise NotUnitary(f"matrix deviates from unitarity by {dev:.3g}")
        M.setflags(write=False)
        object.__setattr__(self, "entries", M)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def first_column(self) -> np.ndarray:
        return self.entries[:, 0]

    def column(self, m: int) -> "ColumnSpec":
        return ColumnSpec(m, self.entries[:, m])

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict, label: str = "file") -> "MultiportUnitary":
        M = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(doc["im"], dtype=float)
        if M.shape != (doc["dim"], doc["dim"]):
            raise ValueError(f"matrix shape {M.shape} does not match dim {doc['dim']}")
        return cls(M, label)


@dataclass(frozen=True)
class ColumnSpec:
    """A unit-norm column destined for position ``index`` of a unitary."""

    index: int
    entries: np.ndarray

    def __post_init__(self):
        v = np.array(self.entries, dtype=complex).ravel()
        dev = abs(float(np.vdot(v, v).real) - 1.0)
        if dev > COLUMN_TOL:
            raise NotNormalized(f"column {self.index} has |norm^2 - 1| = {dev:.3g}")
        v.setflags(write=False)
        object.__setattr__(self, "entries", v)


def dft_unitary(dim: int) -> MultiportUnitary:
    """Discrete Fourier transform multiport, ``U[n, m] = w^(nm) / sqrt(dim)``."""
    if dim < 2:
        raise ValueError("a multiport needs at least two modes")
    n = np.arange(dim)
    # reduce the exponent mod dim before exponentiating to keep phases exact
    M = np.exp(2j * np.pi * (np.outer(n, n) % dim) / dim) / np.sqrt(dim)
    return MultiportUnitary(M, label=f"dft{dim}")


def beamsplitter(t: complex, r: complex, phase: float = np.pi) -> MultiportUnitary:
    """Two-mode beamsplitter with first column ``(t, r)``.

    The second column is ``exp(i*phase) * (-r^*, t^*)``. The default
    ``phase = pi`` makes ``t = r = 1/sqrt(2)`` the two-mode DFT; ``phase = 0``
    makes ``t = 1, r = 0`` the identity.
    """
    t, r = complex(t), complex(r)
    dev = abs(abs(t) ** 2 + abs(r) ** 2 - 1.0)
    if dev > COLUMN_TOL:
        raise NotNormalized(f"|t|^2 + |r|^2 differs from 1 by {dev:.3g}")
    s = np.exp(1j * phase)
    M = np.array([[t, -s * r.conjugate()], [r, s * t.conjugate()]])
    return MultiportUnitary(M, label=f"beamsplitter(phase={phase:.6g})")


def _orthonormality_error(cols: Sequence[np.ndarray]) -> float:
    A = np.column_stack(cols)
    return float(np.max(np.abs(A.conj().T @ A - np.eye(A.shape[1]))))


def complete_unitary(fixed: Iterable[ColumnSpec], dim: Optional[int] = None) -> MultiportUnitary:
    """Fill in a unitary around a set of fixed orthonormal columns.

    The remaining columns come from modified Gram-Schmidt against the standard
    basis ``e_0, e_1, ...``; basis vectors that become dependent are skipped.
    Fixed columns are copied into the result unchanged.
    """
    fixed = sorted(fixed, key=lambda c: c.index)
    if not fixed:
        raise ValueError("at least one fixed column is required")
    dim = dim or fixed[0].entries.size
    indices = [c.index for c in fixed]
    if len(set(indices)) != len(indices):
        raise ValueError(f"duplicate column indices {indices}")
    if any(c.entries.size != dim for c in fixed) or max(indices) >= dim or min(indices) < 0:
        raise ValueError("fixed columns do not fit a square matrix of size %d" % dim)
    err = _orthonormality_error([c.entries for c in fixed])
    if err > ORTHONORMAL_TOL:
        raise NotOrthonormal(f"fixed columns deviate from orthonormality by {err:.3g}")

    basis = [c.entries for c in fixed]
    extra = []
    for j in range(dim):
        if len(basis) == dim:
            break
        v = np.zeros(dim, dtype=complex)
        v[j] = 1.0
        for _ in range(2):  # second pass restores orthogonality lost to roundoff
            for b in basis:
                v = v - np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm < DEPENDENT_TOL:
            continue
        v = v / norm
        basis.append(v)
        extra.append(v)

    M = np.empty((dim, dim), dtype=complex)
    free = [m for m in range(dim) if m not in indices]
    for c in fixed:
        M[:, c.index] = c.entries
    for m, v in zip(free, extra):
        M[:, m] = v
    # inputs are only promised orthonormal to ORTHONORMAL_TOL
    return MultiportUnitary(M, label="completed", tol=max(UNITARY_TOL, 10 * err))


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    Z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))
