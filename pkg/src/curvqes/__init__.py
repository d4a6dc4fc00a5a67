"""Quasi-exactly solvable extensions of the oscillator on a constant-curvature space."""

from .families import GaugeParams, PotentialSpec, make_spec, normalizability
from .fba import BetheProblem, BetheRoots, WCoefficients, derive_w, solve_roots
from .oscillator import OscillatorSpec, SpaceConfig
from .states import SolvedState, solve_states

__all__ = [
    "BetheProblem",
    "BetheRoots",
    "GaugeParams",
    "OscillatorSpec",
    "PotentialSpec",
    "SolvedState",
    "SpaceConfig",
    "WCoefficients",
    "derive_w",
    "make_spec",
    "normalizability",
    "solve_roots",
    "solve_states",
]
