"""Verification reports and the JSON matrix file format.

A report collects every diagnostic for one candidate Riccati solution: the
residuals, the symmetry defects of ``J``, the block-diagonalization defects,
the Y-substitution checks and low-lying spectra.  ``checks`` lists the gated
quantities with their thresholds; ``passed`` is their conjunction.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__, blockdiag, fock, riccati, symmetry
from .rabi import ModelParams, analytic_spectrum, build_full_h, build_h_pm, check_conditions, opnorm

SCHEMA_VERSION = "1"

__all__ = [
    "SCHEMA_VERSION",
    "MatrixFormatError",
    "save_matrix",
    "load_matrix",
    "matrix_to_json",
    "matrix_from_json",
    "dumps",
    "header",
    "build_report",
    "spectrum_table",
]


class MatrixFormatError(ValueError):
    pass


def matrix_to_json(m: np.ndarray) -> dict:
    m = fock.check_operator(m)
    return {
        "dim": int(m.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in m],
    }


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"dim": N, "entries": [[[re, im] x N] x N]}`` (row-major)."""
    try:
        n = obj["dim"]
        entries = obj["entries"]
    except (TypeError, KeyError) as exc:
        raise MatrixFormatError(f"matrix object needs 'dim' and 'entries': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise MatrixFormatError(f"'dim' must be a positive integer, got {n!r}")
    try:
        arr = np.array(entries, dtype=float)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"'entries' is not a numeric array: {exc}") from None
    if arr.shape != (n, n, 2):
        raise MatrixFormatError(f"'entries' must have shape ({n}, {n}, 2), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise MatrixFormatError("'entries' contains non-finite values")
    return arr[..., 0] + 1j * arr[..., 1]


def save_matrix(path, m: np.ndarray) -> None:
    Path(path).write_text(dumps(matrix_to_json(m)))


def load_matrix(path) -> np.ndarray:
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise MatrixFormatError(f"cannot read matrix file {path}: {exc}") from None
    return matrix_from_json(obj)


def _clean(value):
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def dumps(obj) -> str:
    """Deterministic JSON: sorted keys, shortest round-trip floats, non-finite -> null."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2, allow_nan=False) + "\n"


def header(p: ModelParams, command: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "versions": {"schema_version": SCHEMA_VERSION, "tool_version": __version__},
        "params_echo": p.as_dict(),
        "conditions": check_conditions(p).as_dict(),
    }


def _check(value, threshold) -> dict:
    passed = value is not None and math.isfinite(value) and value <= threshold
    return {"value": value, "threshold": threshold, "passed": bool(passed)}


def spectrum_table(p: ModelParams, x: np.ndarray, k: int, rtol: float = 1e-7) -> list[dict]:
    """Lowest ``2k`` reconstructed eigenpairs next to a dense eigensolve of ``H``."""
    h = build_full_h(p).to_array()
    dense = np.linalg.eigvalsh(h)
    j = symmetry.build_generator(x).j.to_array()
    rows = []
    for pair, ref in zip(blockdiag.eigenpairs(p, x, k, rtol=rtol), dense):
        rows.append({
            "value": pair.value,
            "side": pair.side,
            "dense": float(ref),
            "residual": pair.residual,
            "imag": pair.imag,
            "flagged": pair.flagged,
            "j_expectation": float(np.real(np.vdot(pair.vector, j @ pair.vector))),
        })
    return rows


def build_report(p: ModelParams, x: np.ndarray, command: str, solution: riccati.RiccatiSolution | None = None,
                 accept_tol: float = 1e-8, k: int = 10, y_inverse_defect: float | None = None,
                 y_reflection_defect: float | None = None) -> dict:
    """Full diagnostic report for a candidate solution ``x``."""
    x = fock.check_operator(x, p.n)
    proj = p.projector
    h = build_full_h(p)
    h_norm = h.norm()
    h_plus_norm = opnorm(build_h_pm(p, +1))

    full, interior = riccati.residual(x, p)
    if solution is None:
        riccati_block = {
            "converged": None,
            "iterations": 0,
            "x_norm": opnorm(x),
            "a_priori_bound": riccati._bound_or_none(p),
            "residual_full": full,
            "residual_interior": interior,
        }
    else:
        riccati_block = solution.summary()

    gen = symmetry.build_generator(x)
    comm, inv, herm = symmetry.verify_symmetry(gen.j, h, proj)
    symmetry_block = {
        "commutator_norm": comm,
        "commutator_full": symmetry.commutator_full(gen.j, h),
        "involution_defect": inv,
        "hermiticity_defect": herm,
        "signature": symmetry.classify_generator(gen.j),
    }

    bd = blockdiag.block_diagonalize(p, x)
    weighted = blockdiag.weighted_selfadjoint_check(p, x)
    blockdiag_block = {
        "offdiag_defect": bd.offdiag_defect,
        "spectrum_union_defect": bd.spectrum_union_defect,
        "similarity_spectrum_defect": bd.similarity_spectrum_defect,
        "weighted_defects": list(weighted),
    }

    y = riccati.y_from_x(x)
    y_block = {
        "y_residual": riccati.y_residual(y, p),
        "y_inverse_defect": y_inverse_defect,
        "y_reflection_defect": y_reflection_defect,
        "y_nonselfadjoint_norm": opnorm(y - y.conj().T),
        "y_norm": opnorm(y),
    }

    k = min(k, proj.keep)
    table = spectrum_table(p, x, k, rtol=accept_tol)
    spectra = {
        "analytic_plus": analytic_spectrum(p, +1, k),
        "analytic_minus": analytic_spectrum(p, -1, k),
        "numeric_lowest_2k": [row["value"] for row in table],
        "dense_lowest_2k": [row["dense"] for row in table],
        "sides": [row["side"] for row in table],
    }

    scale = max(1.0, h_norm)
    checks = {
        "riccati_residual_interior": _check(interior, accept_tol),
        "commutator_norm": _check(comm, accept_tol * scale),
        "involution_defect": _check(inv, accept_tol),
        "hermiticity_defect": _check(herm, accept_tol),
        "offdiag_defect": _check(bd.offdiag_defect, accept_tol * scale),
        "spectrum_union_defect": _check(bd.spectrum_union_defect, accept_tol * scale),
        "weighted_defect_plus": _check(weighted[0], accept_tol * scale),
        "weighted_defect_minus": _check(weighted[1], accept_tol * scale),
        "y_residual": _check(y_block["y_residual"], accept_tol),
    }
    if solution is not None:
        checks["converged"] = {"value": solution.converged, "threshold": True, "passed": bool(solution.converged)}

    report = header(p, command)
    report.update({
        "riccati": riccati_block,
        "symmetry": symmetry_block,
        "blockdiag": blockdiag_block,
        "y_checks": y_block,
        "spectra": spectra,
        "norms": {"h": h_norm, "h_plus": h_plus_norm},
        "accept_tol": accept_tol,
        "checks": checks,
        "passed": all(c["passed"] for c in checks.values()),
    })
    return report
