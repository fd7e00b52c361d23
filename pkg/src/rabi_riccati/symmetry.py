"""Z2 symmetry generator built from a Riccati solution.

For any bounded ``X`` the graph ``{(psi, X psi)}`` and its orthogonal
complement ``{(-X^* psi, psi)}`` split ``C^2 (x) Fock``.  With
``J0 = 2 (1 + X^* X)^{-1}`` the orthogonal projection onto the graph is

    P_+ = 1/2 [[J0, J0 X^*], [X J0, X J0 X^*]]

and ``J = 2 P_+ - 1`` is a self-adjoint involution.  It commutes with ``H``
exactly when ``X`` solves the Riccati equation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .fock import InteriorProjector
from .rabi import BlockOperator, block_interior, opnorm

__all__ = [
    "SymmetryGenerator",
    "GraphBasis",
    "j0_from_x",
    "build_projection",
    "build_generator",
    "verify_symmetry",
    "graph_bases",
    "sigma_x_parity",
    "sigma_z_identity",
    "classify_generator",
]


@dataclass(frozen=True)
class SymmetryGenerator:
    j: BlockOperator
    j0_block: np.ndarray
    involution_defect: float
    hermiticity_defect: float
    commutator_norm: float | None = None

    def with_commutator(self, value: float) -> "SymmetryGenerator":
        return SymmetryGenerator(self.j, self.j0_block, self.involution_defect,
                                 self.hermiticity_defect, value)


@dataclass(frozen=True)
class GraphBasis:
    graph_vectors: np.ndarray
    complement_vectors: np.ndarray

    @property
    def cross_gram(self) -> np.ndarray:
        return self.graph_vectors.conj().T @ self.complement_vectors


def _hermitian_inverse(m: np.ndarray) -> np.ndarray:
    m = 0.5 * (m + m.conj().T)
    evals, evecs = np.linalg.eigh(m)
    return (evecs / evals) @ evecs.conj().T


def j0_from_x(x: np.ndarray) -> np.ndarray:
    """``2 (1 + X^* X)^{-1}`` via a Hermitian eigendecomposition."""
    x = fock.check_operator(x)
    w = np.eye(x.shape[0]) + x.conj().T @ x
    j0 = 2.0 * _hermitian_inverse(w)
    return 0.5 * (j0 + j0.conj().T)


def build_projection(x: np.ndarray) -> BlockOperator:
    x = fock.check_operator(x)
    j0 = j0_from_x(x)
    xs = x.conj().T
    return BlockOperator(0.5 * j0, 0.5 * j0 @ xs, 0.5 * x @ j0, 0.5 * x @ j0 @ xs)


def _defects(j: np.ndarray) -> tuple[float, float]:
    eye = np.eye(j.shape[0])
    return opnorm(j @ j - eye), opnorm(j - j.conj().T)


def build_generator(x: np.ndarray) -> SymmetryGenerator:
    """``J = 2 P_+ - 1`` together with its involution and hermiticity defects."""
    x = fock.check_operator(x)
    n = x.shape[0]
    j0 = j0_from_x(x)
    xs = x.conj().T
    eye = np.eye(n)
    j = BlockOperator(j0 - eye, j0 @ xs, x @ j0, x @ j0 @ xs - eye)
    inv, herm = _defects(j.to_array())
    return SymmetryGenerator(j=j, j0_block=j0, involution_defect=inv, hermiticity_defect=herm)


def verify_symmetry(j: BlockOperator, h: BlockOperator, p: InteriorProjector) -> tuple[float, float, float]:
    """(interior commutator norm, involution defect, hermiticity defect)."""
    if j.dim != h.dim or j.dim != p.dim:
        raise ValueError(f"dimension mismatch: J {j.dim}, H {h.dim}, projector {p.dim}")
    jm, hm = j.to_array(), h.to_array()
    comm = hm @ jm - jm @ hm
    inv, herm = _defects(jm)
    return opnorm(block_interior(comm, p)), inv, herm


def commutator_full(j: BlockOperator, h: BlockOperator) -> float:
    jm, hm = j.to_array(), h.to_array()
    return opnorm(hm @ jm - jm @ hm)


def _orthonormal_columns(m: np.ndarray) -> np.ndarray:
    # Householder QR is deterministic; fixing sign(diag R) > 0 makes the basis unique.
    q, r = np.linalg.qr(m)
    diag = np.diag(r)
    mag = np.abs(diag)
    phases = np.where(mag > 0, diag / np.where(mag > 0, mag, 1.0), 1.0)
    return q * phases[None, :]


def graph_bases(x: np.ndarray) -> GraphBasis:
    """Orthonormal bases of the graph of ``X`` and of its orthogonal complement."""
    x = fock.check_operator(x)
    eye = np.eye(x.shape[0], dtype=complex)
    graph = np.vstack([eye, x])
    complement = np.vstack([-x.conj().T, eye])
    return GraphBasis(_orthonormal_columns(graph), _orthonormal_columns(complement))


def sigma_x_parity(n: int) -> BlockOperator:
    par = fock.parity(n)
    zero = np.zeros((n, n), dtype=complex)
    return BlockOperator(zero, par, par.copy(), zero.copy())


def sigma_z_identity(n: int) -> BlockOperator:
    eye = np.eye(n, dtype=complex)
    return BlockOperator.diag(eye, -eye)


def classify_generator(j: BlockOperator, atol: float = 1e-12) -> str:
    """Name the local generator ``J`` coincides with, or ``"nonlocal"``."""
    jm = j.to_array()
    candidates = {
        "sigma_z_identity": sigma_z_identity(j.dim).to_array(),
        "sigma_x_parity": sigma_x_parity(j.dim).to_array(),
    }
    for name, ref in candidates.items():
        if np.max(np.abs(jm - ref)) <= atol:
            return name
        if np.max(np.abs(jm + ref)) <= atol:
            return "-" + name
    return "nonlocal"
