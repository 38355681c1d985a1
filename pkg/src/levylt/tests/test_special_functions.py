import logging
import math

import numpy as np
import pytest

from levylt.analytic.special_functions import cosine_integral_ci, erf, erfc, erfcx, gamma, sine_integral_si
from levylt.core.schemas import DomainError
from levylt.core.utils import fourier_integral


def test_si_limits_and_values():
    assert sine_integral_si(1e-12) == pytest.approx(-math.pi / 2, abs=1e-10)
    assert sine_integral_si(math.pi) == pytest.approx(0.2811407, abs=1e-6)
    assert abs(sine_integral_si(50.0)) < 0.02


def test_ci_values_and_small_argument():
    assert cosine_integral_ci(1.0) == pytest.approx(0.3374039, abs=1e-7)
    # ci(x) − ln x → Euler's constant as x → 0+
    assert cosine_integral_ci(1e-6) - math.log(1e-6) == pytest.approx(0.5772157, abs=1e-6)


@pytest.mark.parametrize("function", [sine_integral_si, cosine_integral_ci, gamma])
@pytest.mark.parametrize("argument", [0.0, -1.0, math.inf, math.nan])
def test_positive_argument_required(function, argument):
    with pytest.raises(DomainError) as excinfo:
        function(argument)
    assert excinfo.value.parameter == "x"


def test_error_functions():
    assert erfc(0.0) == 1.0
    assert erfc(1.0) == pytest.approx(0.1572992, abs=1e-7)
    assert erfc(-0.7) == pytest.approx(2.0 - erfc(0.7), abs=1e-15)
    assert erf(0.5) == pytest.approx(0.5204999, abs=1e-7)
    # e^{x²} erfc(x) stays finite where erfc underflows
    assert erfcx(30.0) == pytest.approx(1.0 / (30.0 * math.sqrt(math.pi)), rel=1e-3)


def test_gamma_values():
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    assert gamma(1.0) == 1.0
    assert gamma(2.0 / 3.0) == pytest.approx(1.3541179, abs=1e-7)


def test_vector_arguments_keep_shape():
    values = sine_integral_si([1.0, 2.0, 3.0])
    assert values.shape == (3,)


def test_gamma_recursion():
    x = np.linspace(0.1, 10.0, 199)
    np.testing.assert_allclose(gamma(x + 1.0), x * gamma(x), rtol=1e-11, atol=0.0)


def test_erfc_reflection():
    x = np.linspace(-5.0, 5.0, 201)
    np.testing.assert_allclose(erfc(x) + erfc(-x), 2.0, rtol=0.0, atol=1e-12)


def test_si_stays_bounded():
    values = sine_integral_si(np.linspace(0.01, 200.0, 4000))
    assert np.all(np.abs(values) <= math.pi / 2 + 0.1)


@pytest.mark.parametrize("R", [0.7, 1.3])
@pytest.mark.parametrize("L", [-2.0, -0.5, 0.5, 2.0])
def test_exponential_fourier_pair(L, R):
    # ∫ ds/2π e^{−isL}/(1 − isR) = θ(L) e^{−L/R}/R, folded onto s > 0
    even = fourier_integral(lambda s: 1.0 / (1.0 + (s * R) ** 2), L, "cos", atol=1e-13)
    odd = fourier_integral(lambda s: s * R / (1.0 + (s * R) ** 2), L, "sin", atol=1e-13)
    expected = math.exp(-L / R) / R if L > 0 else 0.0
    assert (even + odd) / math.pi == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("R", [0.7, 1.3])
@pytest.mark.parametrize("L", [-2.0, -0.5, 0.5, 2.0])
def test_exponential_fourier_pair_with_momentum(L, R):
    # ∫ ds/2π is e^{−isL}/(1 − isR) = θ(L) e^{−L/R}/R² − δ(L)/R; away from L = 0
    # the δ drops out once s²R/(1+s²R²) is split as 1/R − (1/R)/(1+s²R²)
    odd = fourier_integral(lambda s: s / (1.0 + (s * R) ** 2), L, "sin", atol=1e-13)
    even = fourier_integral(lambda s: 1.0 / (R * (1.0 + (s * R) ** 2)), L, "cos", atol=1e-13)
    expected = math.exp(-L / R) / R ** 2 if L > 0 else 0.0
    assert (odd + even) / math.pi == pytest.approx(expected, abs=1e-9)


def test_exponential_fourier_pair_jump_at_origin():
    R = 0.9
    h = 1e-3

    def pair(L: float) -> float:
        even = fourier_integral(lambda s: 1.0 / (1.0 + (s * R) ** 2), L, "cos", atol=1e-13)
        odd = fourier_integral(lambda s: s * R / (1.0 + (s * R) ** 2), L, "sin", atol=1e-13)
        return (even + odd) / math.pi

    # the momentum-weighted pair is −d/dL of this one, so its δ(L)/R weight is the jump
    assert pair(h) - pair(-h) == pytest.approx(1.0 / R, rel=2.0 * h / R)


@pytest.mark.parametrize("function, name", [(erf, "erf"), (erfc, "erfc"), (erfcx, "erfcx")])
def test_error_functions_are_traced(caplog, function, name):
    with caplog.at_level(logging.DEBUG, logger="levylt.core.utils.decorators"):
        function(0.3)
    assert any(record.getMessage().startswith(f"{name} called") for record in caplog.records)
