"""Poincare polynomial of the product model and its per-site growth rate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.special import logsumexp

from .counting import NEG_INF, degree_counts, degree_log_counts
from .spec import MoleculeSpec, as_fraction


@dataclass(frozen=True)
class PoincareValue:
    value: float
    per_site_log: float
    log_value: float
    exact: Fraction | None = None


def poincare_polynomial(spec: MoleculeSpec, n: int, t, exact: bool = False,
                        include_constant: bool = False) -> PoincareValue:
    """p(t) = sum_{d >= 1} t^d rk A^d over n sites.

    Evaluated in log space; ``exact=True`` also returns the rational value for
    rational ``t`` (floats are read through their repr).  ``include_constant``
    adds the d = 0 term, giving the full polynomial G(t)^n of the product
    model, which is exactly multiplicative over disjoint windows.  Without it
    the sum is not submultiplicative: for S^1 and n = n' = 1, t = 1 it is
    3 > 1 * 1.
    """
    first = 0 if include_constant else 1
    if n < 1:
        raise ValueError("window size n must be >= 1")
    tf = float(t)
    if tf < 0:
        raise ValueError("t must be nonnegative")
    exact_val = None
    if exact:
        tq = as_fraction(t)
        exact_val = sum((tq ** d * c for d, c in enumerate(degree_counts(spec, n)) if d >= first), Fraction(0))
    logc = degree_log_counts(spec, n)
    if tf == 0:
        if first == 0:
            return PoincareValue(math.exp(logc[0]), float(logc[0]) / n, float(logc[0]), exact_val)
        return PoincareValue(0.0, NEG_INF, NEG_INF, exact_val)
    d = np.arange(len(logc))
    terms = logc[first:] + d[first:] * math.log(tf)
    terms = terms[np.isfinite(terms)]
    log_value = float(logsumexp(terms)) if terms.size else NEG_INF
    value = math.exp(log_value) if log_value < 709 else math.inf
    return PoincareValue(value, log_value / n, log_value, exact_val)


def poincare_limit(spec: MoleculeSpec, t) -> float:
    """Per-site limit ln(sum_j t^{d_j}) of the product model."""
    tf = float(t)
    if tf < 0:
        raise ValueError("t must be nonnegative")
    return math.log(sum(tf ** d for d in spec.degrees))
