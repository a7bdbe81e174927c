"""Monomial model of the cohomology of product systems M^Gamma."""

from .counting import (NEG_INF, MeasureCount, degree_counts, homological_measure_exact,
                       level_count_exact, log_histogram, log_measure)
from .maxent import MaxEntResult, betti_sum_entropy, box_entropy, entropy_asymptotic, maxent
from .morse import MorseReport, MorseSpectrumSpec, SpectrumPoint, morse_check_single
from .poincare import PoincareValue, poincare_limit, poincare_polynomial
from .profile import (EntropyProfile, PigeonholeResult, entropy_profile, exact_rate,
                      pigeonhole_lower_bound)
from .spec import (BUILTIN_SPECS, BasisClass, MoleculeSpec, circle_spec, format_spec, load_spec,
                   parse_spec, point_spec, read_spec, torus_spec)

__all__ = [
    "NEG_INF", "MeasureCount", "degree_counts", "homological_measure_exact", "level_count_exact",
    "log_histogram",
    "log_measure", "MaxEntResult", "betti_sum_entropy", "box_entropy", "entropy_asymptotic",
    "maxent", "MorseReport", "MorseSpectrumSpec", "SpectrumPoint", "morse_check_single",
    "PoincareValue", "poincare_limit", "poincare_polynomial", "EntropyProfile",
    "PigeonholeResult", "entropy_profile", "exact_rate", "pigeonhole_lower_bound",
    "BUILTIN_SPECS", "BasisClass", "MoleculeSpec", "circle_spec", "format_spec", "load_spec",
    "parse_spec", "point_spec", "read_spec", "torus_spec",
]
