"""zetalag: rational-series zeta evaluation via Laguerre expansions of {x}."""

from .numkernel import ComplexPoint, PrecisionContext, make_context
from .stieltjes import StieltjesTable, build_table, stieltjes_em, stieltjes_integral
from .coefficients import (
    CoefficientTable,
    build_coefficient_table,
    binomial_transform,
    inverse_binomial_transform,
)
from .zetaengine import SeriesResult, S_m, chi, zeta, zeta_derivative, zeta_reflected

__version__ = "0.1.0"

__all__ = [
    "ComplexPoint",
    "PrecisionContext",
    "make_context",
    "StieltjesTable",
    "build_table",
    "stieltjes_em",
    "stieltjes_integral",
    "CoefficientTable",
    "build_coefficient_table",
    "binomial_transform",
    "inverse_binomial_transform",
    "SeriesResult",
    "S_m",
    "chi",
    "zeta",
    "zeta_derivative",
    "zeta_reflected",
    "__version__",
]
