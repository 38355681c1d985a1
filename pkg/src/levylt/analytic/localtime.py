"""
Local-time statistics of the symmetric Lévy walk.

E-domain objects (Laplace-conjugate to the elapsed time t) are built directly
from resolvent matrix elements: n-point correlations and the one-point
distribution with its δ(L) atom. Time-domain one-point distributions at the
initial point are obtained by inverting along the rotated Bromwich contour,
which leaves a damped real integral with a sine weight. First moments follow
from the convolution of two transition densities, second moments are given
for Brownian motion only.

Normalization: `w_fixed` and `w_free` are probability densities (divided by
<1> = P_λ(0, t) and <1>* = 1), `onepoint_density_E` is not normalized.
"""
import itertools
import logging
import math
from typing import Literal, Optional, Sequence

from levylt.analytic.resolvent import Energy, ResolventTable, _energy
from levylt.analytic.special_functions import erf, erfc, erfcx, gamma
from levylt.analytic.stable import stable_density
from levylt.core.schemas import (
    AtomicDensity,
    AtomicDensityValue,
    CombinatorialLimitError,
    DivergenceError,
    DomainError,
    EndpointSpec,
    WalkModel,
)
from levylt.core.utils.decorators import EvaluationBudget, traced_operation
from levylt.core.utils.quadrature import (
    DEFAULT_RTOL,
    finite_integral,
    relative_fourier_integral,
    segmented_oscillatory_integral,
    semi_infinite_integral,
)

logger = logging.getLogger(__name__)

MeanMethod = Literal["auto", "quadrature", "momentum"]
DistributionMethod = Literal["auto", "quadrature"]

MAX_CORRELATION_POINTS = 8
# tolerance floor for the nested inversions behind W
LOCAL_TIME_RTOL = 1e-9


def _check_time(t: float, operation: str) -> None:
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"time must be > 0, got {t}", operation, parameter="t")


def _check_local_time(L: float, operation: str) -> None:
    if not math.isfinite(L) or L < 0.0:
        raise DomainError(f"local time must be ≥ 0, got {L}", operation, parameter="L")


def _check_diffusion(D: float, operation: str) -> None:
    if not math.isfinite(D) or D <= 0.0:
        raise DomainError(f"diffusion must be > 0, got {D}", operation, parameter="D")


# ---------------------------------------------------------------- E domain --

@traced_operation("correlation_E")
def correlation_E(
    points: Sequence[float],
    x_a: float,
    x_b: float,
    E: Energy,
    model: WalkModel,
) -> float:
    """
    <L(x_1) … L(x_n)>_E = Σ_σ Π_{k=0}^{n} R(x_σ(k), x_σ(k+1), −E)
    with x_σ(0) = x_a and x_σ(n+1) = x_b.

    Raises:
        CombinatorialLimitError: more than MAX_CORRELATION_POINTS points.
        DivergenceError: λ = 1 and two consecutive chain sites coincide.
    """
    n = len(points)
    if n < 1:
        raise DomainError("at least one point is required", "correlation_E", parameter="points")
    if n > MAX_CORRELATION_POINTS:
        raise CombinatorialLimitError(
            f"{n} points would need {math.factorial(n)} permutation terms "
            f"(limit {MAX_CORRELATION_POINTS})",
            "correlation_E",
        )
    table = ResolventTable(E, model)
    total = 0.0
    for order in itertools.permutations(points):
        chain = (x_a, *order, x_b)
        term = 1.0
        for start, end in zip(chain[:-1], chain[1:]):
            term *= table(start, end)
        total += term
    return total


@traced_operation("onepoint_density_E")
def onepoint_density_E(
    x: float,
    x_a: float,
    x_b: float,
    E: Energy,
    model: WalkModel,
) -> AtomicDensity:
    """
    E-domain one-point distribution of L(x):

        atom     = R(x_a, x_b) − R(x_a, x) R(x, x_b) / R(x, x)
        density  = R(x_a, x) R(x, x_b) / R(x, x)² · exp(−L / R(x, x))

    Its total mass is R(x_a, x_b) = <1>_E.
    """
    if model.is_cauchy:
        raise DivergenceError(
            "the one-point distribution needs a finite diagonal resolvent (λ > 1)", "onepoint_density_E"
        )
    table = ResolventTable(E, model)
    diagonal = table(x, x)
    through = table(x_a, x) * table(x, x_b)
    direct = table(x_a, x_b)
    atom = direct - through / diagonal
    if atom < 0.0:
        # Only roundoff can make it negative: the atom is the mass of paths avoiding x.
        if atom < -1e-12 * direct:
            logger.warning(f"onepoint_density_E: atom {atom:.3g} clamped to 0")
        atom = 0.0
    amplitude = through / diagonal ** 2

    def density(L: float) -> float:
        return amplitude * math.exp(-L / diagonal)

    return AtomicDensity(atom=atom, density=density, continuous_mass=through / diagonal)


@traced_operation("second_moment_E")
def second_moment_E(
    x1: float,
    x2: float,
    x_a: float,
    endpoint: EndpointSpec,
    E: Energy,
    D: float,
) -> float:
    """Brownian <L(x1) L(x2)>_E, fixed or integrated endpoint."""
    _check_diffusion(D, "second_moment_E")
    energy = _energy(E)
    k = math.sqrt(energy / D)
    xi12, xi21 = _xi_pair(x1, x2, x_a, endpoint)
    if endpoint.mode == "fixed":
        denominator = (4.0 * D * energy) ** 1.5
    else:
        denominator = 4.0 * D * energy ** 2
    return (math.exp(-k * xi12) + math.exp(-k * xi21)) / denominator


# ------------------------------------------------- one-point distributions --

def _sigma(model: WalkModel) -> float:
    lam = model.lam
    return lam * model.diffusion ** (1.0 / lam) * math.sin(math.pi / lam)


def _require_distribution_domain(model: WalkModel, operation: str) -> None:
    if model.is_cauchy:
        raise DomainError(
            "at λ = 1 the local-time distribution flattens and is not normalizable",
            operation, parameter="lambda",
        )


def _damping_cutoff(t: float, kappa: float) -> float:
    """u beyond which e^{−t u^{1/κ}} < e^{−45}, i.e. E > 45/t."""
    return (45.0 / t) ** kappa


def w_gauss_fixed_closed(L: float, t: float, D: float) -> float:
    return 2.0 * D * L / t * math.exp(-D * L * L / t)


def w_gauss_free_closed(L: float, t: float, D: float) -> float:
    return math.sqrt(4.0 * D / (math.pi * t)) * math.exp(-D * L * L / t)


@traced_operation("w_fixed")
def w_fixed(
    L: float,
    t: float,
    model: WalkModel,
    method: DistributionMethod = "auto",
    rtol: float = LOCAL_TIME_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """
    Distribution W_λ(L; x_a) of the local time at the initial point for paths
    returning to it (x_b = x_a), normalized by P_λ(0, t).

    With κ = 1 − 1/λ and the substitution u = E^κ the inversion integral reads

        W = λ(Dt)^{1/λ}/Γ(1/λ) · (1/κ) ∫_0^∞ u^{1/(λ−1)} e^{−t u^{1/κ}} e^{aLu} sin(bLu) du,

    a = σ cos(π/λ) ≤ 0, b = σ sin(π/λ), σ = λ D^{1/λ} sin(π/λ). The integral is
    summed over the half-cycles of sin(bLu) up to where e^{−Et} is negligible.
    """
    _check_time(t, "w_fixed")
    _check_local_time(L, "w_fixed")
    _require_distribution_domain(model, "w_fixed")
    D = model.diffusion
    if model.is_gaussian and method == "auto":
        return w_gauss_fixed_closed(L, t, D)
    if L == 0.0:
        return 0.0
    lam = model.lam
    kappa = 1.0 - 1.0 / lam
    sigma = _sigma(model)
    a = sigma * math.cos(math.pi / lam)
    b = sigma * math.sin(math.pi / lam)
    power = 1.0 / (lam - 1.0)

    def damped(u: float) -> float:
        if u == 0.0:
            return 0.0
        return u ** power * math.exp(-t * u ** (1.0 / kappa) + a * L * u) / kappa

    # ∫ damped du without the sine is ∫ e^{−Et} dE = 1/t.
    integral = segmented_oscillatory_integral(
        damped, b * L, _damping_cutoff(t, kappa), kind="sin", scale=1.0 / t,
        points=[(1.0 / (lam * t)) ** kappa], rtol=rtol, budget=budget, label="w_fixed",
    )
    prefactor = lam * (D * t) ** (1.0 / lam) / gamma(1.0 / lam)
    return max(0.0, prefactor * integral)


@traced_operation("w_free")
def w_free(
    L: float,
    t: float,
    model: WalkModel,
    method: DistributionMethod = "auto",
    rtol: float = LOCAL_TIME_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """
    Distribution W*_λ(L; x_a) of the local time at the initial point, endpoint
    integrated. The E^{−1/λ} endpoint singularity is absorbed by u = E^κ:

        W* = (σ/π)(1/κ) ∫_0^∞ e^{−t u^{1/κ}} e^{aLu} sin(bLu + π/λ) du,

    split into a sine and a cosine weighted part.
    """
    _check_time(t, "w_free")
    _check_local_time(L, "w_free")
    _require_distribution_domain(model, "w_free")
    D = model.diffusion
    if model.is_gaussian and method == "auto":
        return w_gauss_free_closed(L, t, D)
    lam = model.lam
    kappa = 1.0 - 1.0 / lam
    sigma = _sigma(model)
    phase = math.pi / lam
    prefactor = sigma / (math.pi * kappa)
    if L == 0.0:
        # ∫_0^∞ e^{−t u^{1/κ}} du = Γ(1 + κ) t^{−κ}
        return prefactor * math.sin(phase) * math.gamma(1.0 + kappa) * t ** (-kappa)
    a = sigma * math.cos(phase)
    b = sigma * math.sin(phase)

    def damped(u: float) -> float:
        return math.exp(-t * u ** (1.0 / kappa) + a * L * u)

    scale = math.gamma(1.0 + kappa) * t ** (-kappa)
    cutoff = _damping_cutoff(t, kappa)
    parts = [
        segmented_oscillatory_integral(
            damped, b * L, cutoff, kind=kind, scale=scale, points=[t ** (-kappa)],
            rtol=rtol, budget=budget, label="w_free",
        )
        for kind in ("sin", "cos")
    ]
    sine_part, cosine_part = parts
    value = prefactor * (sine_part * math.cos(phase) + cosine_part * math.sin(phase))
    return max(0.0, value)


@traced_operation("w_gauss_fixed")
def w_gauss_fixed(L: float, x: float, x_a: float, x_b: float, t: float, D: float) -> AtomicDensityValue:
    """
    Brownian local time at x for paths from x_a to x_b, normalized by the
    Gaussian transition density. The atom vanishes when x lies between x_a and x_b.
    """
    _check_time(t, "w_gauss_fixed")
    _check_local_time(L, "w_gauss_fixed")
    _check_diffusion(D, "w_gauss_fixed")
    span = abs(x_a - x) + abs(x - x_b)
    direct = (x_b - x_a) ** 2
    stretched = span + 2.0 * D * L
    density = stretched / t * math.exp(-(stretched ** 2 - direct) / (4.0 * D * t))
    atom = -math.expm1(-(span ** 2 - direct) / (4.0 * D * t))
    return AtomicDensityValue(density=density, atom=max(0.0, atom))


@traced_operation("w_gauss_free")
def w_gauss_free(L: float, x: float, x_a: float, t: float, D: float) -> AtomicDensityValue:
    """Brownian local time at x with the endpoint integrated; atom erf(|x_a − x|/√(4Dt))."""
    _check_time(t, "w_gauss_free")
    _check_local_time(L, "w_gauss_free")
    _check_diffusion(D, "w_gauss_free")
    gap = abs(x_a - x)
    density = math.sqrt(4.0 * D / (math.pi * t)) * math.exp(-(gap + 2.0 * D * L) ** 2 / (4.0 * D * t))
    return AtomicDensityValue(density=density, atom=erf(gap / math.sqrt(4.0 * D * t)))


# ------------------------------------------------------------ first moment --

def mu_cauchy_fixed(x: float, x_a: float, x_b: float, t: float, D: float) -> float:
    """Closed form of the λ = 1 mean for a fixed endpoint; diverges at x ∈ {x_a, x_b}."""
    if x == x_a or x == x_b:
        raise DivergenceError("the Cauchy mean local time diverges at the endpoints", "mean_fixed")
    c = D * t
    v = x - x_a
    u = x_b - x
    c2 = c * c
    bracket = (
        2.0 * v * (c2 + v * v - u * u) * math.atan(c / v)
        + 2.0 * u * (c2 + u * u - v * v) * math.atan(c / u)
        + c * (c2 + v * v + u * u) * math.log((v * v * u * u) / ((c2 + v * v) * (c2 + u * u)))
    )
    return -bracket / (2.0 * math.pi * D * c * (c2 + (u - v) ** 2))


def mu_cauchy_free(x: float, x_a: float, t: float, D: float) -> float:
    if x == x_a:
        raise DivergenceError("the Cauchy mean local time diverges at the initial point", "mean_free")
    return math.log1p((D * t / (x - x_a)) ** 2) / (2.0 * math.pi * D)


def mu_gauss_fixed(x: float, x_a: float, x_b: float, t: float, D: float) -> float:
    root = math.sqrt(4.0 * D * t)
    span = (abs(x_a - x) + abs(x - x_b)) / root
    direct = (x_b - x_a) / root
    # e^{d²} erfc(s) = erfcx(s) e^{d² − s²}, s ≥ |d|
    return math.sqrt(math.pi * t / (4.0 * D)) * erfcx(span) * math.exp(direct ** 2 - span ** 2)


def mu_gauss_free(x: float, x_a: float, t: float, D: float) -> float:
    gap = abs(x_a - x)
    return (
        math.sqrt(t / (math.pi * D)) * math.exp(-gap * gap / (4.0 * D * t))
        - gap / (2.0 * D) * erfc(gap / math.sqrt(4.0 * D * t))
    )


def _singular_start_integral(
    f, upper: float, singular: bool, lam: float, rtol: float,
    budget: Optional[EvaluationBudget], peak: Optional[float], label: str,
) -> float:
    """
    ∫_0^upper f(τ) dτ where f may behave like τ^{−1/λ} at τ = 0. For a singular
    start τ = s^m with m = λ/(λ−1) makes the integrand bounded.
    """
    if not singular:
        points = [peak] if peak is not None and 0.0 < peak < upper else None
        return finite_integral(f, 0.0, upper, rtol=rtol, points=points, budget=budget, label=label)
    m = lam / (lam - 1.0)

    def flattened(s: float) -> float:
        if s == 0.0:
            return 0.0 if m > 1.0 else f(0.0)
        return m * s ** (m - 1.0) * f(s ** m)

    return finite_integral(flattened, 0.0, upper ** (1.0 / m), rtol=rtol, budget=budget, label=label)


def _mean_fixed_quadrature(
    x: float, x_a: float, x_b: float, t: float, model: WalkModel,
    rtol: float, budget: Optional[EvaluationBudget],
) -> float:
    v = x - x_a
    u = x_b - x
    lam = model.lam
    D = model.diffusion
    if model.is_cauchy and (v == 0.0 or u == 0.0):
        raise DivergenceError("the Cauchy mean local time diverges at the endpoints", "mean_fixed")

    def density(y: float, tau: float) -> float:
        return stable_density(y, tau, model, budget=budget) if tau > 0.0 else 0.0

    def early(t1: float) -> float:
        return density(v, t1) * density(u, t - t1)

    def late(t2: float) -> float:
        return density(v, t - t2) * density(u, t2)

    half = 0.5 * t
    # P(y, τ) as a function of τ peaks near |y|^λ / D.
    left = _singular_start_integral(
        early, half, v == 0.0, lam, rtol, budget, abs(v) ** lam / D if v else None, "mean_fixed",
    )
    right = _singular_start_integral(
        late, half, u == 0.0, lam, rtol, budget, abs(u) ** lam / D if u else None, "mean_fixed",
    )
    return (left + right) / stable_density(x_b - x_a, t, model)


def _propagator_kernel(H: float, H_prime: float, t: float) -> float:
    """(e^{−tH} − e^{−tH′}) / (H′ − H), evaluated without cancellation."""
    delta = H_prime - H
    if delta == 0.0:
        return t * math.exp(-t * H)
    if delta > 0.0:
        return math.exp(-t * H) * -math.expm1(-t * delta) / delta
    return math.exp(-t * H_prime) * -math.expm1(t * delta) / -delta


def _cosine_transform(f, omega: float, bound: float, rtol: float, budget, label: str) -> float:
    if omega == 0.0:
        return semi_infinite_integral(f, 0.0, rtol=rtol, split=[1.0], budget=budget, label=label)
    return relative_fourier_integral(f, omega, scale=bound, rtol=rtol, budget=budget, label=label)


def _mean_fixed_momentum(
    x: float, x_a: float, x_b: float, t: float, model: WalkModel,
    rtol: float, budget: Optional[EvaluationBudget],
) -> float:
    v = abs(x - x_a)
    u = abs(x_b - x)
    if model.is_cauchy and (v == 0.0 or u == 0.0):
        raise DivergenceError("the Cauchy mean local time diverges at the endpoints", "mean_fixed")
    H = model.hamiltonian

    def inner(p: float) -> float:
        Hp = H(p)
        kernel_at_zero = _propagator_kernel(Hp, 0.0, t)

        def kernel(q: float) -> float:
            return _propagator_kernel(Hp, H(q), t) / math.pi

        bound = kernel_at_zero / (math.pi * u) if u else kernel_at_zero
        return _cosine_transform(kernel, u, bound, rtol, budget, "mean_fixed_momentum") / math.pi

    outer_at_zero = inner(0.0)
    outer_bound = outer_at_zero / v if v else outer_at_zero
    numerator = _cosine_transform(inner, v, outer_bound, rtol, budget, "mean_fixed_momentum")
    return numerator / stable_density(x_b - x_a, t, model)


def _mean_free_quadrature(
    x: float, x_a: float, t: float, model: WalkModel,
    rtol: float, budget: Optional[EvaluationBudget],
) -> float:
    v = x - x_a
    if model.is_cauchy and v == 0.0:
        raise DivergenceError("the Cauchy mean local time diverges at the initial point", "mean_free")

    def integrand(t1: float) -> float:
        return stable_density(v, t1, model, budget=budget) if t1 > 0.0 else 0.0

    peak = abs(v) ** model.lam / model.diffusion if v else None
    return _singular_start_integral(integrand, t, v == 0.0, model.lam, rtol, budget, peak, "mean_free")


def _mean_free_momentum(
    x: float, x_a: float, t: float, model: WalkModel,
    rtol: float, budget: Optional[EvaluationBudget],
) -> float:
    v = abs(x - x_a)
    if model.is_cauchy and v == 0.0:
        raise DivergenceError("the Cauchy mean local time diverges at the initial point", "mean_free")

    def weight(p: float) -> float:
        H = model.hamiltonian(p)
        if H == 0.0:
            return t / math.pi
        return -math.expm1(-t * H) / (math.pi * H)

    bound = t / (math.pi * v) if v else t
    return _cosine_transform(weight, v, bound, rtol, budget, "mean_free_momentum")


@traced_operation("mean_fixed")
def mean_fixed(
    x: float,
    x_a: float,
    x_b: float,
    t: float,
    model: WalkModel,
    method: MeanMethod = "auto",
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """
    μ(x) = ∫_0^t P(x_b − x, t − t_1) P(x − x_a, t_1) dt_1 / P(x_b − x_a, t).

    method="auto" uses the closed forms at λ ∈ {1, 2} and the t_1 quadrature
    otherwise; "quadrature" forces the t_1 integral, "momentum" the double
    cosine transform of the propagator kernel.
    """
    _check_time(t, "mean_fixed")
    if method == "auto":
        if model.is_gaussian:
            return mu_gauss_fixed(x, x_a, x_b, t, model.diffusion)
        if model.is_cauchy:
            return mu_cauchy_fixed(x, x_a, x_b, t, model.diffusion)
    if method == "momentum":
        return _mean_fixed_momentum(x, x_a, x_b, t, model, rtol, budget)
    return _mean_fixed_quadrature(x, x_a, x_b, t, model, rtol, budget)


@traced_operation("mean_free")
def mean_free(
    x: float,
    x_a: float,
    t: float,
    model: WalkModel,
    method: MeanMethod = "auto",
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """μ*(x) = ∫_0^t P(x − x_a, t_1) dt_1, the mean local time with the endpoint integrated."""
    _check_time(t, "mean_free")
    if method == "auto":
        if model.is_gaussian:
            return mu_gauss_free(x, x_a, t, model.diffusion)
        if model.is_cauchy:
            return mu_cauchy_free(x, x_a, t, model.diffusion)
        if x == x_a:
            return mean_at_origin(t, model)
    if method == "momentum":
        return _mean_free_momentum(x, x_a, t, model, rtol, budget)
    return _mean_free_quadrature(x, x_a, t, model, rtol, budget)


@traced_operation("mean_at_origin")
def mean_at_origin(t: float, model: WalkModel) -> float:
    """μ*(x_a) = Γ(1/λ) t^{1−1/λ} / (π (λ−1) D^{1/λ})."""
    _check_time(t, "mean_at_origin")
    if model.is_cauchy:
        raise DivergenceError("the Cauchy mean local time diverges at the initial point", "mean_at_origin")
    lam = model.lam
    return gamma(1.0 / lam) * t ** (1.0 - 1.0 / lam) / (math.pi * (lam - 1.0) * model.diffusion ** (1.0 / lam))


def mean_free_sum_rule(t: float, model: WalkModel, x_bar_max: float = 40.0) -> float:
    """
    ∫ μ*(x) dx over the real line, which must equal t. The region
    |x̄| > x_bar_max is added from the tail series of P integrated in time.
    """
    scale = (model.diffusion * t) ** (1.0 / model.lam)
    cut = x_bar_max * scale
    route = "auto" if model.is_gaussian else "momentum"
    inner = finite_integral(
        lambda y: mean_free(y, 0.0, t, model, method=route), 0.0, cut,
        rtol=1e-8, points=[scale, 5.0 * scale], label="mean_free_sum_rule",
    )
    tail = 0.0
    if not model.is_gaussian:
        # ∫_0^t ∫_cut^∞ P dx dt_1 with the leading terms of the tail series.
        lam = model.lam
        D = model.diffusion
        for k in range(1, 4):
            tail += (
                (-1) ** (k + 1) * math.gamma(k * lam + 1.0) / math.factorial(k)
                * math.sin(0.5 * k * math.pi * lam) * D ** k * t ** (k + 1) / (k + 1)
                / (k * lam * cut ** (k * lam))
            ) / math.pi
    return 2.0 * (inner + tail)


# ----------------------------------------------------------- second moment --

def _xi_pair(x1: float, x2: float, x_a: float, endpoint: EndpointSpec):
    hop = abs(x1 - x2)
    if endpoint.mode == "fixed":
        x_b = endpoint.x_b
        return (
            abs(x_a - x1) + hop + abs(x2 - x_b),
            abs(x_a - x2) + hop + abs(x1 - x_b),
        )
    return abs(x_a - x1) + hop, abs(x_a - x2) + hop


@traced_operation("second_moment_gauss")
def second_moment_gauss(
    x1: float,
    x2: float,
    x_a: float,
    endpoint: EndpointSpec,
    t: float,
    D: float,
) -> float:
    """
    <L(x1) L(x2)> for Brownian motion, fixed endpoint normalized by the
    Gaussian transition density or integrated endpoint. Symmetric in x1, x2.
    """
    _check_time(t, "second_moment_gauss")
    _check_diffusion(D, "second_moment_gauss")
    root = math.sqrt(4.0 * D * t)
    total = 0.0
    if endpoint.mode == "fixed":
        direct = (endpoint.x_b - x_a) / root
        for xi in _xi_pair(x1, x2, x_a, endpoint):
            s = xi / root
            total += t / (2.0 * D) * (
                math.exp(direct ** 2 - s ** 2)
                - math.sqrt(math.pi) * s * erfcx(s) * math.exp(direct ** 2 - s ** 2)
            )
        return total
    for xi in _xi_pair(x1, x2, x_a, endpoint):
        total += (
            -math.sqrt(t) * xi / math.sqrt(math.pi * D) * math.exp(-xi * xi / (4.0 * D * t))
            + (xi * xi / (2.0 * D) + t) * erfc(xi / root)
        ) / (4.0 * D)
    return total


def local_time_moment_from_distribution(
    order: int, t: float, model: WalkModel, endpoint: Literal["fixed", "free"] = "fixed",
) -> float:
    """∫_0^∞ L^order W(L) dL at the initial point, from w_fixed or w_free."""
    w = w_fixed if endpoint == "fixed" else w_free
    scale = t / (model.diffusion * t) ** (1.0 / model.lam)
    return semi_infinite_integral(
        lambda L: L ** order * w(L, t, model), 0.0, rtol=LOCAL_TIME_RTOL, split=[scale, 4.0 * scale],
        label="local_time_moment",
    )

