"""
Thin wrappers around scipy.integrate.quad shared by the analytic modules.

`fourier_integral` covers ∫_a^∞ f(p) cos(ωp) dp (or sin) through QUADPACK's
QAWF routine, which integrates cycle by cycle and extrapolates the
alternating series of cycle contributions with the epsilon algorithm.
`finite_integral` and `semi_infinite_integral` are QAGS/QAGI with the
project defaults and with IntegrationWarnings routed to the log.
"""
import logging
import math
import warnings
from typing import Callable, Literal, Optional, Sequence

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from levylt.core.utils.decorators import EvaluationBudget, with_budget

logger = logging.getLogger(__name__)

DEFAULT_RTOL = 1e-10
DEFAULT_LIMIT = 500
DEFAULT_LIMLST = 200

# subdivision and cycle caps handed to QUADPACK; `configure_limits` overrides them
_LIMITS = {"limit": DEFAULT_LIMIT, "limlst": DEFAULT_LIMLST}


def configure_limits(limit: int = DEFAULT_LIMIT, limlst: int = DEFAULT_LIMLST) -> None:
    """Sets the QAGS subinterval cap and the QAWF cycle cap for later calls."""
    if limit < 1 or limlst < 3:
        raise ValueError(f"quadrature limits must be limit ≥ 1 and limlst ≥ 3, got {limit}, {limlst}")
    _LIMITS.update(limit=int(limit), limlst=int(limlst))
    logger.debug(f"Quadrature limits: limit={limit}, limlst={limlst}")


def current_limits() -> dict:
    return dict(_LIMITS)


def _quad_logged(label: str, *args, **kwargs) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        value, abserr = quad(*args, **kwargs)[:2]
    for warning in caught:
        logger.debug(f"{label}: {warning.message} (estimate {value:.6g} ± {abserr:.2g})")
    return value


def finite_integral(
    f: Callable[[float], float],
    a: float,
    b: float,
    rtol: float = DEFAULT_RTOL,
    atol: float = 0.0,
    points: Optional[Sequence[float]] = None,
    budget: Optional[EvaluationBudget] = None,
    label: str = "finite_integral",
) -> float:
    """Adaptive Gauss–Kronrod integral over [a, b] (QAGS / QAGP)."""
    if a == b:
        return 0.0
    inner = [p for p in (points or ()) if min(a, b) < p < max(a, b)]
    return _quad_logged(
        label, with_budget(f, budget), a, b,
        epsabs=atol, epsrel=rtol, limit=_LIMITS["limit"], points=inner or None,
    )


def semi_infinite_integral(
    f: Callable[[float], float],
    a: float = 0.0,
    rtol: float = DEFAULT_RTOL,
    atol: float = 0.0,
    split: Optional[Sequence[float]] = None,
    budget: Optional[EvaluationBudget] = None,
    label: str = "semi_infinite_integral",
) -> float:
    """
    ∫_a^∞ f. Optional split points are integrated as finite pieces first so
    that features (peaks, cusps) are not lost by the 1/(1+u) map of QAGI.
    """
    g = with_budget(f, budget)
    cuts = [a] + sorted(p for p in (split or ()) if p > a)
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total += _quad_logged(label, g, lo, hi, epsabs=atol, epsrel=rtol, limit=_LIMITS["limit"])
    total += _quad_logged(label, g, cuts[-1], np.inf, epsabs=atol, epsrel=rtol, limit=_LIMITS["limit"])
    return total


def fourier_integral(
    f: Callable[[float], float],
    omega: float,
    kind: Literal["cos", "sin"] = "cos",
    a: float = 0.0,
    atol: float = 1e-14,
    budget: Optional[EvaluationBudget] = None,
    label: str = "fourier_integral",
) -> float:
    """
    ∫_a^∞ f(p) cos(ωp) dp (or sin). QAWF only honours an absolute tolerance,
    so callers pass `atol` scaled to the magnitude they expect.
    For ω = 0 the cosine case reduces to a plain QAGI integral and the sine
    case vanishes.
    """
    g = with_budget(f, budget)
    if omega == 0.0:
        if kind == "sin":
            return 0.0
        return _quad_logged(label, g, a, np.inf, epsabs=atol, epsrel=DEFAULT_RTOL, limit=_LIMITS["limit"])
    return _quad_logged(
        label, g, a, np.inf, weight=kind, wvar=abs(omega),
        epsabs=atol, limlst=_LIMITS["limlst"], limit=_LIMITS["limit"],
    ) * (1.0 if kind == "cos" or omega > 0 else -1.0)


def relative_fourier_integral(
    f: Callable[[float], float],
    omega: float,
    scale: float,
    kind: Literal["cos", "sin"] = "cos",
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
    label: str = "fourier_integral",
) -> float:
    """
    Fourier integral to a relative accuracy: a first pass against `scale`
    (the largest value the integral can take), refined against the first
    estimate when that is much smaller.
    """
    value = fourier_integral(f, omega, kind, atol=rtol * scale, budget=budget, label=label)
    if abs(value) < 0.1 * scale and value != 0.0:
        value = fourier_integral(
            f, omega, kind, atol=max(rtol * abs(value), 1e-300), budget=budget, label=label
        )
    return value


MAX_SEGMENTS = 4000


def segmented_oscillatory_integral(
    f: Callable[[float], float],
    omega: float,
    cutoff: float,
    kind: Literal["cos", "sin"] = "sin",
    scale: float = 1.0,
    points: Optional[Sequence[float]] = None,
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
    label: str = "segmented_oscillatory_integral",
) -> float:
    """
    ∫_0^cutoff f(u) sin(ωu) du (or cos) for an f that is negligible beyond
    `cutoff`, summed over the segments between consecutive zeros of the sine,
    with `points` (peaks of f) as extra breakpoints. Falls back to QAWF on
    [0, ∞) when the range holds more than MAX_SEGMENTS half-cycles.
    """
    w = abs(omega)
    sign = -1.0 if kind == "sin" and omega < 0 else 1.0
    n_zeros = int(w * cutoff / math.pi)
    if n_zeros > MAX_SEGMENTS:
        logger.debug(f"{label}: {n_zeros} half-cycles, using QAWF")
        return fourier_integral(f, omega, kind, atol=rtol * scale, budget=budget, label=label)
    trig = math.sin if kind == "sin" else math.cos
    g = with_budget(lambda u: f(u) * trig(w * u), budget)
    cuts = {0.0, cutoff}
    cuts.update(k * math.pi / w for k in range(1, n_zeros + 1) if w > 0.0)
    cuts.update(p for p in (points or ()) if 0.0 < p < cutoff)
    edges = sorted(cuts)
    atol = 1e-3 * rtol * scale
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += _quad_logged(label, g, lo, hi, epsabs=atol, epsrel=rtol, limit=_LIMITS["limit"])
    return sign * total


def cutoff_momentum(rate: float, lam: float, decades: float = 16.0) -> float:
    """Momentum p_max where exp(−rate p^λ) falls below 10^−decades."""
    return (decades * math.log(10.0) / rate) ** (1.0 / lam)
