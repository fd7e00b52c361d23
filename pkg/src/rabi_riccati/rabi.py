"""Rabi Hamiltonian in block form, analytic block spectra and solvability conditions.

The qubit-boson Hamiltonian

    H = beta sigma_z + Delta sigma_x + omega a^dagger a + sigma_z (g^* a + g a^dagger)

is stored as the 2x2 block operator ``[[H_+, Delta], [Delta, H_-]]`` with

    H_pm = omega a^dagger a +- (g^* a + g a^dagger) +- beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import fock
from .fock import FockDim, InteriorProjector

__all__ = [
    "ModelParams",
    "BlockOperator",
    "ConditionReport",
    "opnorm",
    "build_h_pm",
    "build_full_h",
    "displaced_form",
    "analytic_spectrum",
    "spectral_distance",
    "check_conditions",
]


def opnorm(m: np.ndarray) -> float:
    """Operator (spectral) norm, i.e. the largest singular value."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one Rabi instance (hbar = 1) and its truncation.

    ``dim`` may be given as an int; it is promoted to :class:`FockDim` with the
    default interior buffer.
    """

    omega: float
    beta: float
    delta: float
    g: complex
    dim: FockDim = field(default_factory=lambda: FockDim(60))

    def __post_init__(self):
        if not isinstance(self.dim, FockDim):
            object.__setattr__(self, "dim", FockDim(int(self.dim)))
        for name in ("omega", "beta", "delta"):
            value = getattr(self, name)
            if isinstance(value, complex) or np.iscomplexobj(value):
                raise TypeError(f"{name} must be real, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        g = complex(self.g)
        if not (math.isfinite(g.real) and math.isfinite(g.imag)):
            raise ValueError(f"g must be finite, got {self.g!r}")
        object.__setattr__(self, "g", g)
        if self.omega <= 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    @property
    def n(self) -> int:
        return self.dim.n_levels

    @property
    def projector(self) -> InteriorProjector:
        return self.dim.projector

    def replace(self, **changes) -> "ModelParams":
        values = dict(omega=self.omega, beta=self.beta, delta=self.delta, g=self.g, dim=self.dim)
        values.update(changes)
        return ModelParams(**values)

    def as_dict(self) -> dict:
        return {
            "omega": self.omega,
            "beta": self.beta,
            "delta": self.delta,
            "g_re": self.g.real,
            "g_im": self.g.imag,
            "dim": self.dim.n_levels,
            "buffer": self.dim.interior_buffer,
        }


@dataclass(frozen=True)
class BlockOperator:
    """Operator on C^2 (x) Fock written as four equally sized Fock-space blocks."""

    b11: np.ndarray
    b12: np.ndarray
    b21: np.ndarray
    b22: np.ndarray

    def __post_init__(self):
        blocks = [fock.check_operator(b) for b in (self.b11, self.b12, self.b21, self.b22)]
        dims = {b.shape[0] for b in blocks}
        if len(dims) != 1:
            raise ValueError(f"blocks must share one dimension, got {sorted(dims)}")
        for name, b in zip(("b11", "b12", "b21", "b22"), blocks):
            object.__setattr__(self, name, b)

    @property
    def dim(self) -> int:
        return self.b11.shape[0]

    def to_array(self) -> np.ndarray:
        return np.block([[self.b11, self.b12], [self.b21, self.b22]])

    @classmethod
    def from_array(cls, m: np.ndarray) -> "BlockOperator":
        m = np.asarray(m, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
            raise ValueError(f"expected a square matrix of even size, got {m.shape}")
        n = m.shape[0] // 2
        return cls(m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:])

    @classmethod
    def diag(cls, upper: np.ndarray, lower: np.ndarray) -> "BlockOperator":
        zero = np.zeros_like(np.asarray(upper, dtype=complex))
        return cls(upper, zero, zero.copy(), lower)

    def __add__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator.from_array(self.to_array() + other.to_array())

    def __sub__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator.from_array(self.to_array() - other.to_array())

    def __matmul__(self, other: "BlockOperator") -> "BlockOperator":
        return BlockOperator.from_array(self.to_array() @ other.to_array())

    def adjoint(self) -> "BlockOperator":
        return BlockOperator.from_array(self.to_array().conj().T)

    def norm(self) -> float:
        return opnorm(self.to_array())


def interior_indices(p: InteriorProjector) -> np.ndarray:
    """Indices of the interior levels in both components of the 2N-dimensional space."""
    keep = np.arange(p.keep)
    return np.concatenate([keep, keep + p.dim])


def block_interior(m: np.ndarray, p: InteriorProjector) -> np.ndarray:
    """Restrict a 2N x 2N matrix to the interior levels of both components."""
    m = np.asarray(m)
    if m.shape != (2 * p.dim, 2 * p.dim):
        raise ValueError(f"matrix shape {m.shape} does not match 2 x projector dim {p.dim}")
    idx = interior_indices(p)
    return m[np.ix_(idx, idx)]


def _sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign!r}")
    return sign


def build_h_pm(p: ModelParams, sign: int) -> np.ndarray:
    """Diagonal block ``H_+`` (sign=+1) or ``H_-`` (sign=-1)."""
    s = _sign(sign)
    n = p.n
    a = fock.annihilation(n)
    coupling = np.conj(p.g) * a + p.g * a.conj().T
    h = p.omega * fock.number(n) + s * coupling + s * p.beta * fock.identity(n)
    return 0.5 * (h + h.conj().T)


def build_full_h(p: ModelParams) -> BlockOperator:
    off = p.delta * fock.identity(p.n)
    return BlockOperator(build_h_pm(p, +1), off, off.copy(), build_h_pm(p, -1))


def displaced_form(p: ModelParams, sign: int) -> np.ndarray:
    """``H_pm`` rebuilt as a displaced, shifted number operator.

    ``H_pm = D(-+g/omega) (omega N +- beta - |g|^2/omega) D(+-g/omega)`` where
    ``D`` is :func:`fock.displacement` (``D(x)^* a D(x) = a + x``).  Agrees with
    :func:`build_h_pm` only on interior levels.
    """
    s = _sign(sign)
    n = p.n
    shift = p.g / p.omega
    diagonal = p.omega * fock.number(n) + (s * p.beta - abs(p.g) ** 2 / p.omega) * fock.identity(n)
    if p.g == 0:
        return diagonal
    d_left = fock.displacement(-s * shift, n)
    d_right = fock.displacement(s * shift, n)
    return d_left @ diagonal @ d_right


def analytic_spectrum(p: ModelParams, sign: int, n_max: int) -> list[float]:
    """Lowest ``n_max`` eigenvalues ``omega n +- beta - |g|^2/omega`` of the untruncated block."""
    s = _sign(sign)
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    offset = s * p.beta - abs(p.g) ** 2 / p.omega
    return [p.omega * k + offset for k in range(n_max)]


def spectral_distance(p: ModelParams) -> float:
    """Distance between the untruncated spectra of ``H_+`` and ``H_-``.

    Differences of the two spectra are ``omega k + 2 beta`` for integer ``k``,
    so this is the distance from ``2 beta`` to the lattice ``omega Z``.
    """
    r = math.fmod(abs(2.0 * p.beta), p.omega)
    return float(min(r, p.omega - r))


@dataclass(frozen=True)
class ConditionReport:
    two_beta_over_omega_integer: bool
    spectral_distance: float
    smallness_holds: bool
    contraction_holds: bool
    paper_printed_condition_holds: bool
    delta_is_nonzero: bool

    def as_dict(self) -> dict:
        return {
            "two_beta_over_omega_integer": self.two_beta_over_omega_integer,
            "spectral_distance": self.spectral_distance,
            "smallness_holds": self.smallness_holds,
            "contraction_holds": self.contraction_holds,
            "paper_printed_condition_holds": self.paper_printed_condition_holds,
            "delta_is_nonzero": self.delta_is_nonzero,
        }


def check_conditions(p: ModelParams, atol: float = 1e-12) -> ConditionReport:
    """Evaluate the solvability conditions with ``V_1 = V_2 = Delta I``.

    ``smallness_holds`` is ``sqrt(|V1| |V2|) < d/pi`` and ``contraction_holds``
    is ``|V1| + |V2| < 2 d/pi``; both reduce to ``|Delta| < d/pi`` here and both
    require ``Delta != 0``.  ``paper_printed_condition_holds`` is the inequality
    ``Delta/beta > pi/2``, the printed form of the sufficient condition.  It
    does not imply smallness and is reported for comparison only.
    """
    ratio = 2.0 * p.beta / p.omega
    is_integer = abs(ratio - round(ratio)) <= atol
    d = 0.0 if is_integer else spectral_distance(p)
    v = abs(p.delta)
    nonzero = v > 0.0
    # sqrt(|V1| |V2|) == |Delta| exactly; avoid the rounding of sqrt(v * v).
    smallness = nonzero and v < d / math.pi
    contraction = nonzero and (v + v) < 2.0 * d / math.pi
    printed = p.beta != 0.0 and (p.delta / p.beta) > math.pi / 2
    return ConditionReport(
        two_beta_over_omega_integer=bool(is_integer),
        spectral_distance=float(d),
        smallness_holds=bool(smallness),
        contraction_holds=bool(contraction),
        paper_printed_condition_holds=bool(printed),
        delta_is_nonzero=bool(nonzero),
    )
