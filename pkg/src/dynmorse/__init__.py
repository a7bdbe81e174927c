"""Betti-number entropy, quasi-tilings and crystal critical points for lattice product systems."""

__version__ = "0.1.0"
