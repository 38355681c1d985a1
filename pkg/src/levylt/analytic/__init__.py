"""
Analytic side of the library. Modules build on each other bottom-up:

1.  `special_functions`: si, ci, erf/erfc and Γ.
2.  `stable`: the transition density P_λ(x, t), its tails and CDF.
3.  `resolvent`: the Linnik kernel R_λ(x, −E) and δ-peak perturbations of it.
4.  `localtime`: correlation functions, one-point distributions and moments
    of the local time.
"""

from levylt.analytic.localtime import (
    correlation_E,
    mean_at_origin,
    mean_fixed,
    mean_free,
    onepoint_density_E,
    second_moment_E,
    second_moment_gauss,
    w_fixed,
    w_free,
    w_gauss_fixed,
    w_gauss_free,
)
from levylt.analytic.resolvent import (
    peak_characteristic_E,
    perturbed_resolvent,
    resolvent,
    resolvent_diagonal,
    resolvent_imag_axis,
)
from levylt.analytic.special_functions import cosine_integral_ci, erf, erfc, gamma, sine_integral_si
from levylt.analytic.stable import (
    fit_tail,
    recurrence_probability,
    stable_cdf,
    stable_density,
    tail_asymptote,
)

__all__ = [
    "sine_integral_si",
    "cosine_integral_ci",
    "erf",
    "erfc",
    "gamma",
    "stable_density",
    "stable_cdf",
    "recurrence_probability",
    "tail_asymptote",
    "fit_tail",
    "resolvent",
    "resolvent_diagonal",
    "resolvent_imag_axis",
    "perturbed_resolvent",
    "peak_characteristic_E",
    "correlation_E",
    "onepoint_density_E",
    "second_moment_E",
    "w_fixed",
    "w_free",
    "w_gauss_fixed",
    "w_gauss_free",
    "mean_fixed",
    "mean_free",
    "mean_at_origin",
    "second_moment_gauss",
]
