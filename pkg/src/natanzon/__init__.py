"""Exactly solvable workbench for hypergeometric Natanzon potentials."""

from .params import DomainError, NatanzonParams, derive, load, validate
from .mapping import ChangeOfVariable
from .potential import PotentialInstance
from .spectrum import BoundState, enumerate_levels, quantization_residual, solve_level
from .smatrix import find_poles, phase_shift_grid, s_fixed_m, bound_pole_residual

__all__ = [
    "BoundState", "ChangeOfVariable", "DomainError", "NatanzonParams", "PotentialInstance",
    "bound_pole_residual", "derive", "enumerate_levels", "find_poles", "load",
    "phase_shift_grid", "quantization_residual", "s_fixed_m", "solve_level", "validate",
]
