"""Block diagonalization of the Rabi Hamiltonian by a Riccati solution.

With ``S = [[1, -X^*], [X, 1]]`` and ``X`` solving the Riccati equation,

    S^{-1} H S = diag(Z_+, Z_-),   Z_+ = H_+ + Delta X,   Z_- = H_- - Delta X^*.

``Z_+`` and ``Z_-`` are not Hermitian, but they are self-adjoint in the inner
products weighted by ``1 + X^* X`` and ``1 + X X^*``.  Their eigenvectors lift
to eigenvectors of ``H`` lying in the graph of ``X`` or in its complement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .rabi import BlockOperator, ModelParams, build_full_h, build_h_pm, opnorm

__all__ = [
    "ConditioningError",
    "BlockDiagResult",
    "EigenPair",
    "z_operators",
    "similarity",
    "similarity_inverse",
    "block_diagonalize",
    "eigenpairs",
    "weighted_selfadjoint_check",
    "hausdorff",
]


class ConditioningError(ValueError):
    pass


@dataclass(frozen=True)
class BlockDiagResult:
    z_plus: np.ndarray
    z_minus: np.ndarray
    s: BlockOperator
    transformed: BlockOperator
    offdiag_defect: float
    spectrum_union_defect: float
    similarity_spectrum_defect: float


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: np.ndarray
    side: str
    residual: float
    imag: float
    flagged: bool


def z_operators(p: ModelParams, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = fock.check_operator(x, p.n)
    return build_h_pm(p, +1) + p.delta * x, build_h_pm(p, -1) - p.delta * x.conj().T


def similarity(x: np.ndarray) -> BlockOperator:
    x = fock.check_operator(x)
    eye = np.eye(x.shape[0], dtype=complex)
    return BlockOperator(eye, -x.conj().T, x, eye.copy())


def _pd_inverse(m: np.ndarray) -> np.ndarray:
    evals, evecs = np.linalg.eigh(0.5 * (m + m.conj().T))
    return (evecs / evals) @ evecs.conj().T


def similarity_inverse(x: np.ndarray) -> BlockOperator:
    """Closed-form ``S^{-1} = (S^* S)^{-1} S^*``.

    ``S^* S = diag(1 + X^* X, 1 + X X^*)`` is positive definite, so only two
    Hermitian inverses are needed.
    """
    x = fock.check_operator(x)
    eye = np.eye(x.shape[0])
    xs = x.conj().T
    w_plus = _pd_inverse(eye + xs @ x)
    w_minus = _pd_inverse(eye + x @ xs)
    return BlockOperator(w_plus, w_plus @ xs, -w_minus @ x, w_minus)


def hausdorff(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        return 0.0 if a.size == b.size else float("inf")
    dist = np.abs(a[:, None] - b[None, :])
    return float(max(dist.min(axis=1).max(), dist.min(axis=0).max()))


def block_diagonalize(p: ModelParams, x: np.ndarray, cond_max: float = 1e12) -> BlockDiagResult:
    """Transform ``H`` by ``S`` and measure how block diagonal the result is.

    ``offdiag_defect`` is the larger interior norm of the two off-diagonal
    blocks of ``S^{-1} H S``.  Both spectral defects compare the lowest
    ``keep`` eigenvalues: those of ``Z_+`` and ``Z_-`` together (Hausdorff
    distance) and those of ``S^{-1} H S`` (sorted, max abs difference) against
    a dense Hermitian eigensolve of ``H``.
    """
    x = fock.check_operator(x, p.n)
    s = similarity(x)
    svals = np.linalg.svd(s.to_array(), compute_uv=False)
    if not np.all(np.isfinite(svals)) or svals[-1] == 0 or svals[0] / svals[-1] > cond_max:
        raise ConditioningError(f"similarity transform is numerically singular (cond > {cond_max:.1e})")
    s_inv = similarity_inverse(x)
    h = build_full_h(p)
    transformed = s_inv @ h @ s

    proj = p.projector
    offdiag = max(
        opnorm(fock.interior_restrict(transformed.b12, proj)),
        opnorm(fock.interior_restrict(transformed.b21, proj)),
    )

    keep = proj.keep
    h_eigs = np.linalg.eigvalsh(h.to_array())[:keep]
    z_plus, z_minus = z_operators(p, x)
    union = np.sort(np.concatenate([np.linalg.eigvals(z_plus).real, np.linalg.eigvals(z_minus).real]))[:keep]
    t_eigs = np.sort(np.linalg.eigvals(transformed.to_array()).real)[:keep]
    return BlockDiagResult(
        z_plus=z_plus,
        z_minus=z_minus,
        s=s,
        transformed=transformed,
        offdiag_defect=offdiag,
        spectrum_union_defect=hausdorff(h_eigs, union),
        similarity_spectrum_defect=float(np.max(np.abs(t_eigs - h_eigs))),
    )


def eigenpairs(p: ModelParams, x: np.ndarray, k: int, rtol: float = 1e-7) -> list[EigenPair]:
    """Lowest ``2k`` eigenpairs of ``H`` rebuilt from eigenpairs of ``Z_+`` and ``Z_-``.

    Graph-side vectors are ``(psi, X psi)`` with ``Z_+ psi = lambda psi``;
    complement-side vectors are ``(-X^* phi, phi)`` with ``Z_- phi = lambda phi``.
    A pair whose residual ``||H v - lambda v||`` exceeds ``rtol * ||H||`` is
    flagged, not dropped.
    """
    x = fock.check_operator(x, p.n)
    if not 1 <= k <= p.projector.keep:
        raise ValueError(f"k must lie in [1, {p.projector.keep}], got {k}")
    h = build_full_h(p).to_array()
    h_norm = opnorm(h)
    z_plus, z_minus = z_operators(p, x)
    xs = x.conj().T

    candidates = []
    for side, z in (("graph", z_plus), ("complement", z_minus)):
        vals, vecs = np.linalg.eig(z)
        for lam, v in zip(vals, vecs.T):
            full = np.concatenate([v, x @ v]) if side == "graph" else np.concatenate([-xs @ v, v])
            candidates.append((lam, full, side))
    candidates.sort(key=lambda c: (c[0].real, c[2]))

    pairs = []
    for lam, vec, side in candidates[: 2 * k]:
        vec = vec / np.linalg.norm(vec)
        value = float(lam.real)
        res = float(np.linalg.norm(h @ vec - value * vec))
        pairs.append(EigenPair(
            value=value, vector=vec, side=side, residual=res,
            imag=float(abs(lam.imag)), flagged=bool(res > rtol * h_norm),
        ))
    return pairs


def weighted_selfadjoint_check(p: ModelParams, x: np.ndarray) -> tuple[float, float]:
    """Interior norms of ``W_+ Z_+ - Z_+^* W_+`` and ``W_- Z_- - Z_-^* W_-``."""
    x = fock.check_operator(x, p.n)
    eye = np.eye(p.n)
    xs = x.conj().T
    w_plus = eye + xs @ x
    w_minus = eye + x @ xs
    z_plus, z_minus = z_operators(p, x)
    proj = p.projector
    d_plus = w_plus @ z_plus - z_plus.conj().T @ w_plus
    d_minus = w_minus @ z_minus - z_minus.conj().T @ w_minus
    return (
        opnorm(fock.interior_restrict(d_plus, proj)),
        opnorm(fock.interior_restrict(d_minus, proj)),
    )
