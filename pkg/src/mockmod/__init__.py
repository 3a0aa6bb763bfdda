"""Exact q-series toolkit for p-adic congruences of mock modular forms."""

from .coeffring import (HeckeRootPair, PadicScaled, PrecisionError, UnsupportedValuationError,
                        hensel_quadratic_roots, ordp)
from .qseries import QQ, PadicRing, QSeries, RationalField, WindowError, congruent_mod

__all__ = [
    "HeckeRootPair", "PadicScaled", "PrecisionError", "UnsupportedValuationError",
    "hensel_quadratic_roots", "ordp", "QQ", "PadicRing", "QSeries", "RationalField",
    "WindowError", "congruent_mod",
]
