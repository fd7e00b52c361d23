"""Nonlocal Z2 symmetry of the quantum Rabi model via an operator Riccati equation."""

__version__ = "0.1.0"

from .fock import FockDim, InteriorProjector
from .rabi import BlockOperator, ConditionReport, ModelParams, build_full_h, build_h_pm, check_conditions
from .riccati import RiccatiSolution, SolverConfig, solve_brute_force, solve_fixed_point
from .symmetry import build_generator
from .blockdiag import block_diagonalize, eigenpairs

__all__ = [
    "__version__",
    "FockDim",
    "InteriorProjector",
    "BlockOperator",
    "ConditionReport",
    "ModelParams",
    "build_full_h",
    "build_h_pm",
    "check_conditions",
    "RiccatiSolution",
    "SolverConfig",
    "solve_brute_force",
    "solve_fixed_point",
    "build_generator",
    "block_diagonalize",
    "eigenpairs",
]
