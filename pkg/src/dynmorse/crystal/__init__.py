"""Windowed crystal energies of circle-valued sites and their critical points."""

from .energy import WindowEnergy, build_energy, chain, grid, window_edges
from .locality import DecayRow, locality_decay, window_delta
from .morse_bound import LevelCheck, MarginRow, MorseBoundReport, morse_bound_check, window_bound
from .potential import PairPotential
from .solver import CriticalPoint, CriticalSet, SolverConfig, find_critical_points
from .spectrum import SpectrumHistogram, cri, spectrum

__all__ = [
    "WindowEnergy", "build_energy", "chain", "grid", "window_edges", "DecayRow",
    "locality_decay", "window_delta", "LevelCheck", "MarginRow", "MorseBoundReport", "window_bound",
    "morse_bound_check", "PairPotential", "CriticalPoint", "CriticalSet", "SolverConfig",
    "find_critical_points", "SpectrumHistogram", "cri", "spectrum",
]
