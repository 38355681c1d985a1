"""
Shared components of levylt used by the analytic, Monte Carlo and CLI layers.

Modules:
- schemas: pydantic models for the domain types and the LevyLTError hierarchy.
- resources: configuration loading, logging bootstrap and worker-count resolution.
- utils: operation tracing, evaluation budgets and the quadrature wrappers.
"""

# This makes it possible to do `from levylt.core import schemas, resources`
from levylt.core import resources
from levylt.core import schemas

__all__ = [
    "resources",
    "schemas",
]
