"""Certified S-integral points on complements of divisors in P^2, P^3 and three Fano threefolds."""

from .arith import HomForm, ProjPoint, SPrimeSet, normalize, parse_point
from .integrality import DivisorConfig, are_coprime, certify_point, curve_nonreduction
from .sunits import hyperbola_solve, pell_fundamental, pell_like_solve
from .beukers import generate_on_curve
from .density import density_witness

__version__ = "0.1.0"

__all__ = [
    "HomForm", "ProjPoint", "SPrimeSet", "normalize", "parse_point",
    "DivisorConfig", "are_coprime", "certify_point", "curve_nonreduction",
    "hyperbola_solve", "pell_fundamental", "pell_like_solve",
    "generate_on_curve", "density_witness",
]
