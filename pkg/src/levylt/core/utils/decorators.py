"""
Reusable decorators and helpers wrapped around the numerical operations:
operation tracing with typed error conversion, and evaluation budgets for
long quadratures.
"""
import logging
from functools import wraps
from typing import Any, Callable, Optional

from levylt.core.schemas import BudgetExceededError, LevyLTError

logger = logging.getLogger(__name__)


def traced_operation(name: str) -> Callable:
    """
    A decorator that logs each call of a public operation at DEBUG level and
    turns stray floating-point failures into a LevyLTError naming the operation.

    Errors that already belong to the levylt hierarchy pass through untouched.

    Args:
        name: The operation name reported in logs and error messages.
    """
    def decorator(f: Callable) -> Callable:
        @wraps(f)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            logger.debug(f"{name} called with args={args} kwargs={kwargs}")
            try:
                return f(*args, **kwargs)
            except LevyLTError as e:
                if e.operation is None:
                    e.operation = name
                raise
            except (ZeroDivisionError, OverflowError, FloatingPointError) as e:
                logger.error(f"Operation '{name}' failed with {type(e).__name__}: {e}", exc_info=True)
                raise LevyLTError(f"{type(e).__name__}: {e}", operation=name) from e
        return wrapper
    return decorator


class EvaluationBudget:
    """
    Caps the number of integrand evaluations a caller is willing to pay for.
    A single budget may be shared by nested integrations; once exhausted every
    wrapped integrand raises BudgetExceededError, which interrupts quad.
    """
    def __init__(self, max_evaluations: int):
        if max_evaluations < 1:
            raise ValueError("max_evaluations must be positive")
        self.max_evaluations = max_evaluations
        self.used = 0

    @property
    def remaining(self) -> int:
        return max(0, self.max_evaluations - self.used)

    def charge(self, count: int = 1) -> None:
        self.used += count
        if self.used > self.max_evaluations:
            raise BudgetExceededError(
                f"evaluation budget of {self.max_evaluations} integrand calls exhausted"
            )

    def wrap(self, f: Callable[..., float]) -> Callable[..., float]:
        @wraps(f)
        def counted(*args: Any) -> float:
            self.charge()
            return f(*args)
        return counted


def with_budget(f: Callable[..., float], budget: Optional[EvaluationBudget]) -> Callable[..., float]:
    """Returns f unchanged when no budget is given."""
    return f if budget is None else budget.wrap(f)
