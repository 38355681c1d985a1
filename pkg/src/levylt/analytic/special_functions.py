"""
Scalar special functions needed by the closed forms.

si and ci follow the convention si(x) = −∫_1^∞ sin(px)/p dp = Si(x) − π/2 and
ci(x) = −∫_1^∞ cos(px)/p dp = Ci(x). They are only defined here for x > 0.
scipy.special evaluates Si/Ci with the Cephes routines (power series below
x = 4, auxiliary f, g rational approximations above), erf/erfc to full double
precision, and Γ by Cephes' rational/Stirling scheme.
"""
import math

import numpy as np
from scipy import special as sp

from levylt.core.schemas import DomainError
from levylt.core.utils.decorators import traced_operation


def _require_positive(x, operation: str) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(values)) or np.any(values <= 0.0):
        raise DomainError(f"argument must be finite and > 0, got {x}", operation, parameter="x")
    return values


def _scalar_or_array(values: np.ndarray):
    return float(values) if values.ndim == 0 else values


@traced_operation("sine_integral_si")
def sine_integral_si(x):
    """si(x) = Si(x) − π/2 for x > 0."""
    values = _require_positive(x, "sine_integral_si")
    si, _ = sp.sici(values)
    return _scalar_or_array(si - 0.5 * math.pi)


@traced_operation("cosine_integral_ci")
def cosine_integral_ci(x):
    """ci(x) = Ci(x) for x > 0; ci diverges like ln x at the origin."""
    values = _require_positive(x, "cosine_integral_ci")
    _, ci = sp.sici(values)
    return _scalar_or_array(ci)


@traced_operation("erf")
def erf(x):
    return _scalar_or_array(sp.erf(np.asarray(x, dtype=float)))


@traced_operation("erfc")
def erfc(x):
    return _scalar_or_array(sp.erfc(np.asarray(x, dtype=float)))


@traced_operation("erfcx")
def erfcx(x):
    """Scaled complement e^{x²} erfc(x), finite where e^{x²} alone overflows."""
    return _scalar_or_array(sp.erfcx(np.asarray(x, dtype=float)))


@traced_operation("gamma")
def gamma(x):
    """Γ(x) for x > 0."""
    values = _require_positive(x, "gamma")
    return _scalar_or_array(sp.gamma(values))
