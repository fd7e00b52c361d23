"""Truncated Fock-space realizations of single-mode bosonic operators.

All operators are dense ``complex128`` arrays acting on the span of the
first ``n_levels`` number states ``|0>, ..., |n_levels - 1>``.  Truncation is
hard: rows and columns above the cutoff are deleted.  This keeps the band and
sign identities (``P a P = -a``, ``a^dagger = a^*``) exact, while the
canonical commutator picks up a single defect in the last diagonal entry::

    [a, a^dagger] = I - n_levels |n_levels - 1><n_levels - 1|

Identities that only hold in the untruncated limit are compared on the
leading ``keep`` levels via :class:`InteriorProjector`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "FockDim",
    "InteriorProjector",
    "annihilation",
    "creation",
    "number",
    "parity",
    "identity",
    "displacement",
    "interior_restrict",
    "check_operator",
]


@dataclass(frozen=True)
class InteriorProjector:
    """Keep the first ``keep`` Fock levels out of ``dim``."""

    dim: int
    keep: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dim must be positive, got {self.dim}")
        if not 0 < self.keep <= self.dim:
            raise ValueError(f"keep must lie in (0, {self.dim}], got {self.keep}")

    @property
    def diagonal(self) -> np.ndarray:
        mask = np.zeros(self.dim)
        mask[: self.keep] = 1.0
        return mask

    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal).astype(complex)


@dataclass(frozen=True)
class FockDim:
    """Number of retained Fock levels plus the buffer excluded from interior checks.

    ``interior_buffer`` defaults to ``n_levels // 4``.
    """

    n_levels: int
    interior_buffer: int | None = None

    def __post_init__(self):
        if int(self.n_levels) != self.n_levels or self.n_levels < 2:
            raise ValueError(f"n_levels must be an integer >= 2, got {self.n_levels}")
        buffer = self.n_levels // 4 if self.interior_buffer is None else self.interior_buffer
        if buffer < 0 or buffer > self.n_levels / 2:
            raise ValueError(
                f"interior_buffer must lie in [0, n_levels/2] = [0, {self.n_levels / 2}], got {buffer}"
            )
        object.__setattr__(self, "n_levels", int(self.n_levels))
        object.__setattr__(self, "interior_buffer", int(buffer))

    @property
    def keep(self) -> int:
        return self.n_levels - self.interior_buffer

    @property
    def projector(self) -> InteriorProjector:
        return InteriorProjector(self.n_levels, self.keep)


DimLike = Union[int, FockDim]


def _levels(d: DimLike) -> int:
    # Bare integers may go down to a single level (used for the trivial d=1 cases).
    if isinstance(d, FockDim):
        return d.n_levels
    n = int(d)
    if n != d or n < 1:
        raise ValueError(f"number of Fock levels must be a positive integer, got {d!r}")
    return n


def annihilation(d: DimLike) -> np.ndarray:
    """Lowering operator with ``a[n-1, n] = sqrt(n)``."""
    n = _levels(d)
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), k=1).astype(complex)


def creation(d: DimLike) -> np.ndarray:
    """Raising operator, the conjugate transpose of :func:`annihilation`."""
    return annihilation(d).conj().T.copy()


def number(d: DimLike) -> np.ndarray:
    n = _levels(d)
    return np.diag(np.arange(n, dtype=float)).astype(complex)


def parity(d: DimLike) -> np.ndarray:
    """Bosonic parity ``exp(i pi a^dagger a) = diag(+1, -1, +1, ...)``."""
    n = _levels(d)
    return np.diag(np.where(np.arange(n) % 2 == 0, 1.0, -1.0)).astype(complex)


def identity(d: DimLike) -> np.ndarray:
    return np.eye(_levels(d), dtype=complex)


def displacement(x: complex, d: DimLike) -> np.ndarray:
    """Weyl displacement ``exp(x a^dagger - x^* a)`` in the truncated space.

    The generator is anti-Hermitian, so the exponential is taken through the
    eigendecomposition of the Hermitian matrix ``i (x a^dagger - x^* a)``; the
    result is unitary up to rounding.  Convention: ``D(x)|0> = |x>`` (coherent
    state), so ``D(x)^* a D(x) = a + x``.
    """
    x = complex(x)
    if not np.isfinite(x):
        raise ValueError(f"displacement amplitude must be finite, got {x!r}")
    n = _levels(d)
    if x == 0:
        return identity(n)
    generator = x * creation(n) - np.conj(x) * annihilation(n)
    herm = 1j * generator
    herm = 0.5 * (herm + herm.conj().T)
    evals, evecs = np.linalg.eigh(herm)
    return (evecs * np.exp(-1j * evals)) @ evecs.conj().T


def interior_restrict(m: np.ndarray, p: InteriorProjector) -> np.ndarray:
    """Leading ``keep x keep`` principal submatrix of ``m``."""
    m = np.asarray(m)
    if m.shape != (p.dim, p.dim):
        raise ValueError(f"matrix shape {m.shape} does not match projector dim {p.dim}")
    return m[: p.keep, : p.keep]


def check_operator(m: np.ndarray, dim: int | None = None) -> np.ndarray:
    """Validate a square finite matrix and return it as ``complex128``."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"operator must be a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ValueError(f"operator dimension {m.shape[0]} does not match expected {dim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    return m
