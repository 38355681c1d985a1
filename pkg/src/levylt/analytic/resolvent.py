"""
Resolvent kernel of the Lévy Hamiltonian, R_λ(x, −E) = <x'|(Ĥ + E)^{-1}|x>,
i.e. the Linnik (geometric stable) density scaled by 1/E.

Routes:
  - closed forms: λ = 2 (exponential) and λ = 1 (sine/cosine integrals);
  - diagonal value for any λ > 1;
  - the imaginary-axis representation
        R = −(1/π) Im ∫_0^∞ dv e^{−v|x|} / (E + D v^λ e^{iπλ/2}),
    smooth and non-oscillatory, used for generic λ at x ≠ 0;
  - the momentum integral (1/π) ∫_0^∞ cos(px)/(D p^λ + E) dp, kept as an
    independent check.

Convention: R(x, x') = R(x' − x); every function here takes the displacement.
The δ-peak perturbed resolvent R_U solves the second resolvent identity for
U(x) = Σ_j u_j δ(x − x_j).
"""
import logging
import math
from typing import Dict, List, Literal, Optional, Sequence, Union

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from levylt.analytic.special_functions import cosine_integral_ci, sine_integral_si
from levylt.core.schemas import (
    DivergenceError,
    DomainError,
    EnergyParam,
    PeakPotential,
    SingularMatrixError,
    WalkModel,
)
from levylt.core.utils.decorators import EvaluationBudget, traced_operation
from levylt.core.utils.quadrature import (
    DEFAULT_RTOL,
    relative_fourier_integral,
    semi_infinite_integral,
)

logger = logging.getLogger(__name__)

Energy = Union[float, EnergyParam]
Route = Literal["auto", "momentum", "imag_axis"]

MAX_EXPECTED_PEAKS = 16


def _energy(E: Energy) -> float:
    return EnergyParam.of(E).E


def resolvent_length_scale(E: Energy, model: WalkModel) -> float:
    """(D/E)^{1/λ}, the length that makes E R_λ dimensionless."""
    return (model.diffusion / _energy(E)) ** (1.0 / model.lam)


def gaussian_resolvent(x: float, E: float, diffusion: float) -> float:
    return math.exp(-math.sqrt(E / diffusion) * abs(x)) / math.sqrt(4.0 * diffusion * E)


def cauchy_resolvent(x: float, E: float, diffusion: float) -> float:
    if x == 0.0:
        raise DivergenceError(
            "the Cauchy resolvent diverges logarithmically on the diagonal", "resolvent"
        )
    z = E * abs(x) / diffusion
    return -(math.sin(z) * sine_integral_si(z) + math.cos(z) * cosine_integral_ci(z)) / (
        math.pi * diffusion
    )


@traced_operation("resolvent_diagonal")
def resolvent_diagonal(E: Energy, model: WalkModel) -> float:
    """R_λ(0, −E) = E^{1/λ − 1} / (λ D^{1/λ} sin(π/λ)); diverges at λ = 1."""
    energy = _energy(E)
    lam = model.lam
    if model.is_cauchy:
        raise DivergenceError("the resolvent is singular on the diagonal at λ = 1", "resolvent_diagonal")
    return energy ** (1.0 / lam - 1.0) / (
        lam * model.diffusion ** (1.0 / lam) * math.sin(math.pi / lam)
    )


@traced_operation("resolvent_imag_axis")
def resolvent_imag_axis(
    x: float,
    E: Energy,
    model: WalkModel,
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """
    Imaginary-axis representation of R_λ(x, −E) for x ≠ 0.

    The integrand is (1/π) e^{−v|x|} D v^λ sin(πλ/2) / |E + D v^λ e^{iπλ/2}|².
    At λ = 2 it collapses onto the pole v = √(E/D) and the integral is that
    pole's residue, the Gaussian resolvent.
    """
    if x == 0.0:
        raise DomainError(
            "the imaginary-axis integral does not converge absolutely at x = 0",
            "resolvent_imag_axis", parameter="x",
        )
    energy = _energy(E)
    D = model.diffusion
    if model.is_gaussian:
        return gaussian_resolvent(x, energy, D)
    lam = model.lam
    ax = abs(x)
    c = math.cos(0.5 * math.pi * lam)
    s = math.sin(0.5 * math.pi * lam)

    def integrand(v: float) -> float:
        a = D * v ** lam
        re = energy + a * c
        im = a * s
        return math.exp(-v * ax) * im / (math.pi * (re * re + im * im))

    split: List[float] = [1.0 / ax]
    if c < 0.0:
        # Lorentzian-like peak where E + D v^λ cos(πλ/2) vanishes; narrow as λ → 2.
        v0 = (energy / (D * -c)) ** (1.0 / lam)
        width = min(0.5, 10.0 * s)
        split += [v0 * (1.0 - width), v0, v0 * (1.0 + width)]
    return semi_infinite_integral(
        integrand, 0.0, rtol=rtol, split=split, budget=budget, label="resolvent_imag_axis"
    )


def _resolvent_momentum(
    x: float, energy: float, model: WalkModel, rtol: float, budget: Optional[EvaluationBudget]
) -> float:
    D = model.diffusion
    lam = model.lam

    def weight(p: float) -> float:
        return 1.0 / (math.pi * (D * p ** lam + energy))

    if x == 0.0:
        if model.is_cauchy:
            raise DivergenceError("the resolvent is singular on the diagonal at λ = 1", "resolvent")
        return semi_infinite_integral(
            weight, 0.0, rtol=rtol, split=[resolvent_length_scale(energy, model) ** -1],
            budget=budget, label="resolvent_momentum",
        )
    # For decreasing weights |∫ f cos| ≤ f(0)/ω bounds the value.
    return relative_fourier_integral(
        weight, abs(x), scale=1.0 / (math.pi * energy * abs(x)),
        rtol=rtol, budget=budget, label="resolvent_momentum",
    )


@traced_operation("resolvent")
def resolvent(
    x: float,
    E: Energy,
    model: WalkModel,
    method: Route = "auto",
    rtol: float = DEFAULT_RTOL,
    budget: Optional[EvaluationBudget] = None,
) -> float:
    """
    R_λ(x, −E) > 0.

    method="auto" uses the closed forms at λ ∈ {1, 2}, the diagonal formula at
    x = 0 and the imaginary-axis integral otherwise; "momentum" and
    "imag_axis" force the corresponding quadrature.

    Raises:
        DivergenceError: λ = 1 at x = 0.
    """
    energy = _energy(E)
    x = abs(float(x))
    if method == "momentum":
        return _resolvent_momentum(x, energy, model, rtol, budget)
    if method == "imag_axis":
        return resolvent_imag_axis(x, energy, model, rtol=rtol, budget=budget)
    if model.is_gaussian:
        return gaussian_resolvent(x, energy, model.diffusion)
    if model.is_cauchy:
        return cauchy_resolvent(x, energy, model.diffusion)
    if x == 0.0:
        return resolvent_diagonal(energy, model)
    return resolvent_imag_axis(x, energy, model, rtol=rtol, budget=budget)


def resolvent_tail_series(x: float, E: Energy, model: WalkModel, terms: int = 3) -> float:
    """
    Large-|x| expansion obtained by Laplace-transforming the stable tail series:
    R ~ (1/π) Σ_k (−1)^{k+1} Γ(kλ+1) sin(kπλ/2) D^k / (E^{k+1} |x|^{kλ+1}).
    """
    energy = _energy(E)
    lam = model.lam
    total = 0.0
    for k in range(1, terms + 1):
        total += (
            (-1) ** (k + 1) * math.gamma(k * lam + 1.0) * math.sin(0.5 * k * math.pi * lam)
            * model.diffusion ** k / (energy ** (k + 1) * abs(x) ** (k * lam + 1.0))
        )
    return total / math.pi


def resolvent_tail_mass(x: float, E: Energy, model: WalkModel, terms: int = 3) -> float:
    """∫_{|x|}^∞ of `resolvent_tail_series`."""
    energy = _energy(E)
    lam = model.lam
    total = 0.0
    for k in range(1, terms + 1):
        total += (
            (-1) ** (k + 1) * math.gamma(k * lam + 1.0) * math.sin(0.5 * k * math.pi * lam)
            * model.diffusion ** k / (energy ** (k + 1) * k * lam * abs(x) ** (k * lam))
        )
    return total / math.pi


class ResolventTable:
    """
    Memoizes R(x, x') for a fixed (E, model) by displacement, so that sums
    over many site pairs evaluate each distinct quadrature once.
    """
    def __init__(self, E: Energy, model: WalkModel, rtol: float = DEFAULT_RTOL):
        self.energy = _energy(E)
        self.model = model
        self.rtol = rtol
        self._cache: Dict[float, float] = {}

    def __call__(self, x_from: float, x_to: float) -> float:
        key = abs(x_to - x_from)
        if key not in self._cache:
            self._cache[key] = resolvent(key, self.energy, self.model, rtol=self.rtol)
        return self._cache[key]

    def matrix(self, sites: Sequence[float]) -> np.ndarray:
        return np.array([[self(a, b) for b in sites] for a in sites])


@traced_operation("perturbed_resolvent")
def perturbed_resolvent(
    x_a: float,
    x_b: float,
    E: Energy,
    peaks: PeakPotential,
    model: WalkModel,
    rtol: float = DEFAULT_RTOL,
) -> Union[float, complex]:
    """
    R_U(x_a, x_b) for U = Σ_j u_j δ(x − x_j):

        R_U = R(x_a, x_b) − Σ_{j,k} u_j R(x_a, x_j) (M^{-1})_{jk} R(x_k, x_b),
        M_{jk} = δ_{jk} + u_k R(x_j, x_k).

    Complex strengths are allowed (u_j = −i s_j gives the E-domain
    characteristic function of the local times); the result is real when all
    strengths are real.

    Raises:
        DivergenceError: λ = 1 with at least one peak.
        SingularMatrixError: det M = 0.
    """
    table = ResolventTable(E, model, rtol=rtol)
    if not peaks.peaks:
        return table(x_a, x_b)
    if model.is_cauchy:
        raise DivergenceError(
            "δ-peaks need a finite diagonal resolvent, which λ = 1 lacks", "perturbed_resolvent"
        )
    if len(peaks.peaks) > MAX_EXPECTED_PEAKS:
        logger.warning(f"perturbed_resolvent called with {len(peaks.peaks)} peaks; dense solve may be slow")

    sites = peaks.positions
    u = np.asarray(peaks.strengths, dtype=complex)
    R = table.matrix(sites)
    M = np.eye(len(sites), dtype=complex) + R * u[np.newaxis, :]

    lu, piv = lu_factor(M, check_finite=True)
    pivots = np.abs(np.diag(lu))
    if np.any(pivots <= np.finfo(float).eps * max(1.0, np.abs(M).max()) * len(sites)):
        raise SingularMatrixError(
            f"peak matrix is singular at E={table.energy} (pole of the perturbed resolvent)",
            "perturbed_resolvent",
        )
    to_end = np.array([table(x_k, x_b) for x_k in sites], dtype=complex)
    from_start = np.array([table(x_a, x_j) for x_j in sites], dtype=complex)
    amplitudes = lu_solve((lu, piv), to_end)
    value = table(x_a, x_b) - np.sum(u * from_start * amplitudes)

    if np.all(u.imag == 0.0):
        return float(value.real)
    return complex(value)


@traced_operation("peak_characteristic_E")
def peak_characteristic_E(
    points: Sequence[float],
    s: Sequence[float],
    x_a: float,
    x_b: float,
    E: Energy,
    model: WalkModel,
) -> complex:
    """
    <exp(i Σ_j s_j L(x_j))>_E, the E-domain characteristic function of the
    local times at distinct points: R_U with u_j = −i s_j.
    """
    if len(points) != len(s):
        raise DomainError("points and s must have the same length", "peak_characteristic_E", parameter="s")
    peaks = PeakPotential.from_pairs((x, -1j * sj) for x, sj in zip(points, s))
    return complex(perturbed_resolvent(x_a, x_b, E, peaks, model))
