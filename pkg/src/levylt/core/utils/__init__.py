"""
Low-level helpers shared by the numerical modules.
"""

from levylt.core.utils.decorators import EvaluationBudget, traced_operation, with_budget
from levylt.core.utils.quadrature import (
    finite_integral,
    fourier_integral,
    relative_fourier_integral,
    semi_infinite_integral,
)

__all__ = [
    "EvaluationBudget",
    "traced_operation",
    "with_budget",
    "finite_integral",
    "fourier_integral",
    "relative_fourier_integral",
    "semi_infinite_integral",
]
