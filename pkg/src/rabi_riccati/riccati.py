"""Operator Riccati equation ``Delta X^2 + X H_+ - H_- X - Delta = 0``.

The solver is the contraction iteration

    X_{k+1} = Sylv(Delta I - Delta X_k^2),   Sylv(C) = the X with X H_+ - H_- X = C,

whose inner Sylvester step is well posed exactly when the spectra of ``H_+``
and ``H_-`` are disjoint.  Under the smallness condition ``|Delta| < d/pi``
the map contracts on a ball and the iteration converges to the unique small
solution.  :func:`solve_brute_force` is an independent oracle that enumerates
invariant graph subspaces of the assembled Hamiltonian.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from . import fock
from .rabi import ModelParams, build_full_h, build_h_pm, check_conditions, opnorm

__all__ = [
    "SpectralGapError",
    "ConditionError",
    "SolverConfig",
    "RiccatiSolution",
    "riccati_operator",
    "residual",
    "sylvester_solve",
    "solve_fixed_point",
    "norm_bound",
    "solve_brute_force",
    "y_from_x",
    "x_from_y",
    "y_operator",
    "y_residual",
    "y_inverse_check",
    "y_reflection_check",
]

logger = logging.getLogger(__name__)


class SpectralGapError(ValueError):
    """The Sylvester coefficients have (numerically) overlapping spectra."""

    def __init__(self, min_gap: float, floor: float):
        self.min_gap = float(min_gap)
        self.floor = float(floor)
        super().__init__(
            f"Sylvester equation is not uniquely solvable: minimal eigenvalue gap "
            f"{self.min_gap:.3e} is below the floor {self.floor:.3e}"
        )


class ConditionError(ValueError):
    """Raised when the solver gate (smallness condition) fails without override."""

    def __init__(self, report):
        self.report = report
        super().__init__(
            "smallness condition |Delta| < d/pi does not hold "
            f"(d = {report.spectral_distance:.6g}); pass override_gate=True to iterate anyway"
        )


InitialGuess = Union[str, np.ndarray]


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-point iteration settings.

    ``initial_guess`` is ``"zero"``, ``"parity"`` or an explicit matrix.
    ``residual_tol`` is the interior Riccati residual required, in addition
    to the step criterion ``tol``, before a run is reported as converged.
    """

    tol: float = 1e-12
    max_iter: int = 1000
    initial_guess: InitialGuess = "zero"
    residual_tol: float = 1e-8
    gap_floor: float = 1e-10
    divergence_norm: float = 1e6

    def __post_init__(self):
        if not (self.tol >= 1e-14):
            raise ValueError(f"tol must be >= 1e-14, got {self.tol}")
        if not (1 <= int(self.max_iter) <= 10**6):
            raise ValueError(f"max_iter must lie in [1, 1e6], got {self.max_iter}")
        if isinstance(self.initial_guess, str):
            if self.initial_guess not in ("zero", "parity"):
                raise ValueError(f"unknown initial guess {self.initial_guess!r}")
        else:
            object.__setattr__(self, "initial_guess", fock.check_operator(self.initial_guess))

    def start(self, n: int) -> np.ndarray:
        if isinstance(self.initial_guess, str):
            if self.initial_guess == "zero":
                return np.zeros((n, n), dtype=complex)
            return fock.parity(n)
        return fock.check_operator(self.initial_guess, n).copy()


@dataclass
class RiccatiSolution:
    x0: np.ndarray
    iterations: int
    converged: bool
    step_norms: list[float] = field(default_factory=list)
    residual_full: float = math.nan
    residual_interior: float = math.nan
    x_norm: float = math.nan
    a_priori_bound: float | None = None

    @property
    def is_contraction(self) -> bool:
        return self.x_norm < 1.0

    def summary(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "x_norm": self.x_norm,
            "a_priori_bound": self.a_priori_bound,
            "residual_full": self.residual_full,
            "residual_interior": self.residual_interior,
        }


def riccati_operator(x: np.ndarray, p: ModelParams) -> np.ndarray:
    """``R(X) = Delta X^2 + X H_+ - H_- X - Delta I``."""
    x = fock.check_operator(x, p.n)
    h_plus = build_h_pm(p, +1)
    h_minus = build_h_pm(p, -1)
    return p.delta * (x @ x) + x @ h_plus - h_minus @ x - p.delta * np.eye(p.n)


def residual(x: np.ndarray, p: ModelParams) -> tuple[float, float]:
    """Operator norms of ``R(X)`` on the full truncated space and on the interior."""
    r = riccati_operator(x, p)
    return opnorm(r), opnorm(fock.interior_restrict(r, p.projector))


class _Sylvester:
    """Reusable solver for ``X a - b X = c`` with Hermitian ``a``, ``b``."""

    def __init__(self, a: np.ndarray, b: np.ndarray, gap_floor: float = 1e-10):
        a = fock.check_operator(a)
        b = fock.check_operator(b, a.shape[0])
        self.alpha, self.ua = np.linalg.eigh(0.5 * (a + a.conj().T))
        self.beta, self.ub = np.linalg.eigh(0.5 * (b + b.conj().T))
        # denom[i, j] = alpha_j - beta_i, indexed like ub^* X ua
        self.denom = self.alpha[None, :] - self.beta[:, None]
        self.min_gap = float(np.min(np.abs(self.denom))) if self.denom.size else math.inf
        if self.min_gap <= gap_floor:
            raise SpectralGapError(self.min_gap, gap_floor)

    def __call__(self, c: np.ndarray) -> np.ndarray:
        ct = self.ub.conj().T @ c @ self.ua
        return self.ub @ (ct / self.denom) @ self.ua.conj().T


def sylvester_solve(a: np.ndarray, b: np.ndarray, c: np.ndarray, gap_floor: float = 1e-10) -> np.ndarray:
    """Unique solution of ``X a - b X = c`` for Hermitian ``a``, ``b`` with disjoint spectra.

    Works in the eigenbases of ``a`` and ``b``, where the equation decouples
    entrywise.  Raises :class:`SpectralGapError` when the smallest eigenvalue
    difference is not above ``gap_floor``.
    """
    solver = _Sylvester(a, b, gap_floor)
    c = fock.check_operator(c, solver.alpha.size)
    return solver(c)


def norm_bound(p: ModelParams) -> float:
    """A-priori bound ``(d/pi - sqrt(d^2/pi^2 - Delta^2)) / |Delta|`` on the small solution.

    Evaluated in the cancellation-free form ``|Delta| / (d/pi + sqrt(...))``.
    Defined for ``0 < |Delta| <= d/pi``.
    """
    report = check_conditions(p)
    d_pi = report.spectral_distance / math.pi
    v = abs(p.delta)
    if v == 0.0 or v > d_pi:
        raise ValueError(
            f"norm bound undefined: need 0 < |Delta| <= d/pi, got |Delta|={v:.6g}, d/pi={d_pi:.6g}"
        )
    return v / (d_pi + math.sqrt(max(d_pi * d_pi - v * v, 0.0)))


def _bound_or_none(p: ModelParams) -> float | None:
    try:
        return norm_bound(p)
    except ValueError:
        return None


def _finish(x: np.ndarray, p: ModelParams, iterations: int, steps: list[float], step_ok: bool,
            cfg: SolverConfig) -> RiccatiSolution:
    full, interior = residual(x, p)
    converged = bool(step_ok and interior <= cfg.residual_tol)
    return RiccatiSolution(
        x0=x,
        iterations=iterations,
        converged=converged,
        step_norms=steps,
        residual_full=full,
        residual_interior=interior,
        x_norm=opnorm(x),
        a_priori_bound=_bound_or_none(p),
    )


def solve_fixed_point(p: ModelParams, cfg: SolverConfig | None = None,
                      override_gate: bool = False) -> RiccatiSolution:
    """Iterate ``X -> Sylv(Delta - Delta X^2)`` to the small Riccati solution.

    Without ``override_gate`` the call refuses (:class:`ConditionError`) unless
    the smallness condition holds.  An initial guess that already solves the
    equation to ``cfg.tol`` is returned at iteration 0 without building the
    Sylvester solver, so exact solutions such as the parity at ``beta = 0``
    are accepted even though the inner step is ill posed there.
    """
    cfg = cfg or SolverConfig()
    report = check_conditions(p)
    if not report.smallness_holds and not override_gate:
        raise ConditionError(report)

    n = p.n
    x = cfg.start(n)
    if residual(x, p)[0] <= cfg.tol:
        return _finish(x, p, 0, [], True, cfg)

    sylv = _Sylvester(build_h_pm(p, +1), build_h_pm(p, -1), cfg.gap_floor)
    forcing = p.delta * np.eye(n, dtype=complex)
    steps: list[float] = []
    for k in range(1, cfg.max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x_new = sylv(forcing - p.delta * (x @ x))
        if not np.all(np.isfinite(x_new)) or opnorm(x_new) > cfg.divergence_norm:
            logger.info("fixed-point iteration diverged at step %d", k)
            return _finish(x, p, k - 1, steps, False, cfg)
        step = opnorm(x_new - x)
        steps.append(step)
        x = x_new
        if step <= cfg.tol:
            return _finish(x, p, k, steps, True, cfg)
    logger.info("fixed-point iteration stopped after %d steps, last step %.3e", cfg.max_iter, steps[-1])
    return _finish(x, p, cfg.max_iter, steps, False, cfg)


def solve_brute_force(p: ModelParams, cond_max: float = 1e8, residual_tol: float = 1e-8) -> list[RiccatiSolution]:
    """All Riccati solutions whose graphs are spanned by eigenvectors of ``H``.

    Every ``N``-subset of eigenvectors of the assembled ``2N x 2N`` Hamiltonian
    spans an invariant subspace; when its upper block ``U`` is invertible the
    subspace is the graph of ``X = L U^{-1}``.  Only candidates with residual
    at most ``residual_tol`` are kept, sorted by norm.  Cost grows like
    ``C(2N, N)``, so ``N <= 8``.
    """
    n = p.n
    if n > 8:
        raise ValueError(f"brute-force enumeration is limited to n_levels <= 8, got {n}")
    _, vecs = np.linalg.eigh(build_full_h(p).to_array())
    bound = _bound_or_none(p)
    found: list[np.ndarray] = []
    for subset in itertools.combinations(range(2 * n), n):
        cols = vecs[:, subset]
        upper, lower = cols[:n], cols[n:]
        if np.linalg.cond(upper) >= cond_max:
            continue
        x = np.linalg.solve(upper.T, lower.T).T
        if residual(x, p)[0] > residual_tol:
            continue
        if any(opnorm(x - y) <= residual_tol for y in found):
            continue
        found.append(x)

    solutions = []
    for x in found:
        full, interior = residual(x, p)
        solutions.append(RiccatiSolution(
            x0=x, iterations=0, converged=True, residual_full=full,
            residual_interior=interior, x_norm=opnorm(x), a_priori_bound=bound,
        ))
    solutions.sort(key=lambda s: s.x_norm)
    return solutions


# Substitution X = P Y.  With this ordering the Riccati equation becomes
#   Delta Y P Y + [Y, H0_+] + 2 beta Y - Delta P = 0,   H0_+ = H_+ at beta = 0,
# and the left-hand side equals P R(X) exactly.

def y_from_x(x: np.ndarray) -> np.ndarray:
    x = fock.check_operator(x)
    return fock.parity(x.shape[0]) @ x


def x_from_y(y: np.ndarray) -> np.ndarray:
    y = fock.check_operator(y)
    return fock.parity(y.shape[0]) @ y


def y_operator(y: np.ndarray, p: ModelParams) -> np.ndarray:
    """Left-hand side ``alpha Y P Y + [Y, H0_+] + 2 beta Y - alpha P`` with ``alpha = Delta``."""
    y = fock.check_operator(y, p.n)
    h0 = build_h_pm(p.replace(beta=0.0), +1)
    par = fock.parity(p.n)
    alpha = p.delta
    return alpha * (y @ par @ y) + (y @ h0 - h0 @ y) + 2.0 * p.beta * y - alpha * par


def y_residual(y: np.ndarray, p: ModelParams, interior: bool = True) -> float:
    r = y_operator(y, p)
    if interior:
        r = fock.interior_restrict(r, p.projector)
    return opnorm(r)


def _solve_y(p: ModelParams, cfg: SolverConfig | None, override_gate: bool) -> np.ndarray:
    sol = solve_fixed_point(p, cfg, override_gate=override_gate)
    if not sol.converged:
        raise RuntimeError(f"Riccati solve did not converge for beta={p.beta}")
    return y_from_x(sol.x0)


def y_inverse_check(p: ModelParams, cfg: SolverConfig | None = None,
                    override_gate: bool = False) -> float:
    """Interior norm of ``Y_{beta} Y_{-beta} - I`` for the small solutions at +-beta.

    Note the small solution at ``-beta`` is ``-Y_beta^*`` (see
    :func:`y_reflection_check`), so for ``beta != 0`` this defect is of order
    one; ``Y_beta^{-1}`` solves the ``-beta`` equation but lies outside the
    uniqueness ball.
    """
    y_plus = _solve_y(p, cfg, override_gate)
    y_minus = _solve_y(p.replace(beta=-p.beta), cfg, override_gate)
    defect = y_plus @ y_minus - np.eye(p.n)
    return opnorm(fock.interior_restrict(defect, p.projector))


def y_reflection_check(p: ModelParams, cfg: SolverConfig | None = None,
                       override_gate: bool = False) -> dict:
    """Relations between the ``+beta`` and ``-beta`` Y-equations.

    Returns interior norms of

    * ``reflection_defect``: ``Y_{-beta} + Y_beta^*`` (small solutions at both signs),
    * ``inverse_residual``: the ``-beta`` Y-equation evaluated at ``Y_beta^{-1}``,
      scaled by ``1 / ||Y_beta^{-1}||^2`` since the equation is quadratic.
    """
    y_plus = _solve_y(p, cfg, override_gate)
    p_minus = p.replace(beta=-p.beta)
    y_minus = _solve_y(p_minus, cfg, override_gate)
    proj = p.projector
    reflection = opnorm(fock.interior_restrict(y_minus + y_plus.conj().T, proj))
    y_inv = np.linalg.inv(y_plus)
    scale = max(opnorm(y_inv), 1.0) ** 2
    inverse_res = y_residual(y_inv, p_minus) / scale
    return {"reflection_defect": reflection, "inverse_residual": inverse_res}
