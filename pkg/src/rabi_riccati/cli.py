"""Command-line front end: ``rabi-riccati {solve,verify,sweep,spectrum}``.

Exit codes: 0 all checks pass, 1 some reported defect exceeds its threshold,
2 usage error or malformed input, 3 solver gate refused (smallness condition
fails and ``--override-gate`` not given), 4 iteration did not converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import report as rpt
from . import riccati, symmetry
from .fock import FockDim
from .rabi import ModelParams, build_full_h, check_conditions, opnorm
from .riccati import ConditionError, SolverConfig, SpectralGapError

EXIT_OK = 0
EXIT_DEFECT = 1
EXIT_USAGE = 2
EXIT_GATE = 3
EXIT_NOT_CONVERGED = 4

SWEEP_HEADER = ["beta", "delta", "d", "smallness", "converged", "iterations", "x_norm", "commutator"]


@dataclass(frozen=True)
class Range:
    lo: float
    hi: float
    steps: int

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    solver: SolverConfig
    output_format: str = "json"
    output_path: str | None = None
    override_gate: bool = False
    accept_tol: float = 1e-8
    k: int = 10
    beta_range: Range | None = None
    delta_range: Range | None = None
    save_x: str | None = None


class UsageError(ValueError):
    pass


def parse_range(text: str) -> Range:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected LO:HI:N, got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI:N with numeric values, got {text!r}") from None
    if steps < 2:
        raise argparse.ArgumentTypeError(f"range needs at least 2 steps, got {steps}")
    return Range(lo, hi, steps)


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _gate_report(p: ModelParams, command: str, message: str) -> dict:
    out = rpt.header(p, command)
    out["error"] = message
    out["passed"] = False
    return out


def _solve_with_y(cfg: RunConfig):
    sol = riccati.solve_fixed_point(cfg.params, cfg.solver, override_gate=cfg.override_gate)
    y_inv = y_ref = None
    if sol.converged and cfg.params.beta != 0.0:
        try:
            y_inv = riccati.y_inverse_check(cfg.params, cfg.solver, override_gate=cfg.override_gate)
            y_ref = riccati.y_reflection_check(cfg.params, cfg.solver, cfg.override_gate)["reflection_defect"]
        except (ConditionError, SpectralGapError, RuntimeError, np.linalg.LinAlgError):
            pass
    return sol, y_inv, y_ref


def cmd_solve(cfg: RunConfig) -> tuple[int, dict]:
    p = cfg.params
    try:
        sol, y_inv, y_ref = _solve_with_y(cfg)
    except ConditionError as exc:
        return EXIT_GATE, _gate_report(p, "solve", str(exc))
    except SpectralGapError as exc:
        return EXIT_NOT_CONVERGED, _gate_report(p, "solve", str(exc))
    out = rpt.build_report(p, sol.x0, "solve", solution=sol, accept_tol=cfg.accept_tol, k=cfg.k,
                           y_inverse_defect=y_inv, y_reflection_defect=y_ref)
    out["riccati"]["step_norms"] = sol.step_norms
    if cfg.save_x:
        rpt.save_matrix(cfg.save_x, sol.x0)
    if not sol.converged:
        return EXIT_NOT_CONVERGED, out
    return (EXIT_OK if out["passed"] else EXIT_DEFECT), out


def cmd_verify(cfg: RunConfig, x_input: str) -> tuple[int, dict]:
    p = cfg.params
    try:
        x = rpt.load_matrix(x_input)
    except rpt.MatrixFormatError as exc:
        return EXIT_USAGE, _gate_report(p, "verify", str(exc))
    if x.shape[0] != p.n:
        return EXIT_USAGE, _gate_report(p, "verify", f"matrix dim {x.shape[0]} does not match --dim {p.n}")
    out = rpt.build_report(p, x, "verify", accept_tol=cfg.accept_tol, k=cfg.k)
    return (EXIT_OK if out["passed"] else EXIT_DEFECT), out


def sweep_point(p: ModelParams, solver: SolverConfig, override_gate: bool) -> dict:
    cond = check_conditions(p)
    row = {
        "beta": p.beta,
        "delta": p.delta,
        "d": cond.spectral_distance,
        "smallness": cond.smallness_holds,
        "converged": False,
        "iterations": 0,
        "x_norm": float("nan"),
        "commutator": float("nan"),
    }
    if not cond.smallness_holds and not override_gate:
        return row
    try:
        sol = riccati.solve_fixed_point(p, solver, override_gate=True)
    except (SpectralGapError, np.linalg.LinAlgError):
        return row
    gen = symmetry.build_generator(sol.x0) if np.all(np.isfinite(sol.x0)) else None
    row.update(converged=sol.converged, iterations=sol.iterations, x_norm=sol.x_norm)
    if gen is not None:
        row["commutator"] = symmetry.verify_symmetry(gen.j, build_full_h(p), p.projector)[0]
    return row


def _threads() -> int:
    env = os.environ.get("RABI_RICCATI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def cmd_sweep(cfg: RunConfig) -> tuple[int, list[dict]]:
    if cfg.beta_range is None or cfg.delta_range is None:
        raise UsageError("sweep needs --beta-range and --delta-range")
    points = [cfg.params.replace(beta=float(b), delta=float(d))
              for b in cfg.beta_range.values() for d in cfg.delta_range.values()]
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        rows = list(pool.map(lambda q: sweep_point(q, cfg.solver, cfg.override_gate), points))
    return EXIT_OK, rows


def cmd_spectrum(cfg: RunConfig) -> tuple[int, dict]:
    p = cfg.params
    try:
        sol = riccati.solve_fixed_point(p, cfg.solver, override_gate=cfg.override_gate)
    except ConditionError as exc:
        return EXIT_GATE, _gate_report(p, "spectrum", str(exc))
    except SpectralGapError as exc:
        return EXIT_NOT_CONVERGED, _gate_report(p, "spectrum", str(exc))
    out = rpt.header(p, "spectrum")
    out["riccati"] = sol.summary()
    if not sol.converged:
        out["passed"] = False
        return EXIT_NOT_CONVERGED, out
    k = min(cfg.k, p.projector.keep)
    h_norm = opnorm(build_full_h(p).to_array())
    rows = rpt.spectrum_table(p, sol.x0, k, rtol=cfg.accept_tol)
    max_err = max(abs(r["value"] - r["dense"]) for r in rows)
    passed = max_err <= cfg.accept_tol * h_norm and not any(r["flagged"] for r in rows)
    out.update(pairs=rows, max_abs_error=max_err, accept_tol=cfg.accept_tol, passed=passed)
    return (EXIT_OK if passed else EXIT_DEFECT), out


def _csv(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        cells = []
        for col in columns:
            v = row[col]
            cells.append(("true" if v else "false") if isinstance(v, bool) else repr(v) if isinstance(v, float) else v)
        writer.writerow(cells)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", type=float, default=1.0)
    common.add_argument("--beta", type=float, default=0.2)
    common.add_argument("--delta", type=float, default=0.1)
    common.add_argument("--g-re", type=float, default=0.1)
    common.add_argument("--g-im", type=float, default=0.0)
    common.add_argument("--dim", type=int, default=60)
    common.add_argument("--buffer", type=int, default=None, help="interior buffer (default dim//4)")
    common.add_argument("--tol", type=float, default=1e-12, help="fixed-point step tolerance")
    common.add_argument("--accept-tol", type=float, default=1e-8, help="acceptance threshold for defects")
    common.add_argument("--max-iter", type=int, default=1000)
    common.add_argument("--init", choices=["zero", "parity"], default="zero")
    common.add_argument("--override-gate", action="store_true",
                        help="iterate even when the smallness condition fails")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--k", type=int, default=10, help="number of eigenpairs per side to report")

    parser = argparse.ArgumentParser(prog="rabi-riccati", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    solve = sub.add_parser("solve", parents=[common], help="solve the Riccati equation and verify")
    solve.add_argument("--save-x", default=None, help="write the solution matrix to this JSON file")
    verify = sub.add_parser("verify", parents=[common], help="verify a stored candidate solution")
    verify.add_argument("x_input", help="JSON matrix file {dim, entries}")
    sweep = sub.add_parser("sweep", parents=[common], help="scan a (beta, delta) grid")
    sweep.add_argument("--beta-range", type=parse_range, required=True, metavar="LO:HI:N")
    sweep.add_argument("--delta-range", type=parse_range, required=True, metavar="LO:HI:N")
    sub.add_parser("spectrum", parents=[common], help="eigenvalues rebuilt from Z+ and Z-")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        params = ModelParams(
            omega=args.omega, beta=args.beta, delta=args.delta, g=complex(args.g_re, args.g_im),
            dim=FockDim(args.dim, args.buffer),
        )
        solver = SolverConfig(tol=args.tol, max_iter=args.max_iter, initial_guess=args.init,
                              residual_tol=args.accept_tol)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    if args.k < 1:
        raise UsageError(f"--k must be positive, got {args.k}")
    return RunConfig(
        params=params,
        solver=solver,
        output_format=args.format,
        output_path=args.out,
        override_gate=args.override_gate,
        accept_tol=args.accept_tol,
        k=args.k,
        beta_range=getattr(args, "beta_range", None),
        delta_range=getattr(args, "delta_range", None),
        save_x=getattr(args, "save_x", None),
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        cfg = config_from_args(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"rabi-riccati: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "sweep":
        code, rows = cmd_sweep(cfg)
        text = _csv(rows, SWEEP_HEADER) if cfg.output_format == "csv" else rpt.dumps(rows)
        _emit(text, cfg.output_path)
        return code

    if args.command == "solve":
        code, out = cmd_solve(cfg)
    elif args.command == "verify":
        code, out = cmd_verify(cfg, args.x_input)
    else:
        code, out = cmd_spectrum(cfg)

    if cfg.output_format == "csv" and args.command == "spectrum" and "pairs" in out:
        text = _csv(out["pairs"], ["value", "side", "dense", "residual", "j_expectation"])
    else:
        # Reports are nested; CSV applies only to tabular outputs.
        text = rpt.dumps(out)
    _emit(text, cfg.output_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
