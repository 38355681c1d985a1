"""
Pydantic schemas and the error hierarchy shared across the levylt packages.

These models are the single source of truth for the shape of the domain
objects, so the analytic modules, the Monte Carlo pipeline and the CLI all
validate their inputs the same way.
"""

import math
from typing import Callable, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from scipy.integrate import quad


class LevyLTError(Exception):
    """Base exception for failures inside a levylt operation."""
    def __init__(self, message: str, operation: Optional[str] = None):
        self.message = message
        self.operation = operation
        prefix = f"{operation}: " if operation else ""
        super().__init__(f"{prefix}{message}")


class DomainError(LevyLTError, ValueError):
    """An argument lies outside the domain of the operation."""
    def __init__(self, message: str, operation: Optional[str] = None, parameter: Optional[str] = None):
        self.parameter = parameter
        super().__init__(message, operation)


class DivergenceError(LevyLTError, ArithmeticError):
    """The requested quantity diverges (e.g. the Cauchy resolvent on the diagonal)."""
    pass


class SingularMatrixError(LevyLTError, ArithmeticError):
    """The peak matrix M is singular, i.e. E sits on a pole of the perturbed resolvent."""
    pass


class CombinatorialLimitError(LevyLTError):
    """Too many points for the n! permutation sum."""
    pass


class ConfigurationError(LevyLTError):
    """A run or Monte Carlo configuration is inconsistent."""
    pass


class BudgetExceededError(LevyLTError):
    """A caller-supplied evaluation budget was exhausted."""
    pass


class WalkModel(BaseModel):
    """
    The Lévy Hamiltonian H(p) = D |p|^λ, defined by its index and its
    diffusion constant (units length^λ / time).
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    lam: float = Field(..., ge=1.0, le=2.0, alias="lambda", description="Lévy index λ, 1 ≤ λ ≤ 2.")
    diffusion: float = Field(1.0, gt=0.0, description="Generalized diffusion constant D_λ > 0.")

    @field_validator("lam", "diffusion")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError("must be finite")
        return value

    @property
    def is_gaussian(self) -> bool:
        return self.lam == 2.0

    @property
    def is_cauchy(self) -> bool:
        return self.lam == 1.0

    def hamiltonian(self, p: float) -> float:
        return self.diffusion * abs(p) ** self.lam


class SpaceTimePoint(BaseModel):
    """Arguments of P_λ(x, t); x is a displacement x_b − x_a."""
    model_config = ConfigDict(frozen=True)

    x: float
    t: float = Field(..., gt=0.0)


class EnergyParam(BaseModel):
    """Laplace-conjugate energy E > 0 (units 1/time)."""
    model_config = ConfigDict(frozen=True)

    E: float = Field(..., gt=0.0)

    @classmethod
    def of(cls, value: "float | EnergyParam") -> "EnergyParam":
        return value if isinstance(value, EnergyParam) else cls(E=value)


class Peak(BaseModel):
    """A single δ-peak u δ(x − position) of the source potential."""
    model_config = ConfigDict(frozen=True)

    position: float
    strength: complex


class PeakPotential(BaseModel):
    """U(x) = Σ_j u_j δ(x − x_j) with pairwise distinct positions."""
    model_config = ConfigDict(frozen=True)

    peaks: Tuple[Peak, ...] = ()

    @model_validator(mode="after")
    def _distinct_positions(self) -> "PeakPotential":
        positions = [peak.position for peak in self.peaks]
        if len(set(positions)) != len(positions):
            raise ValueError("peak positions must be pairwise distinct")
        return self

    @classmethod
    def from_pairs(cls, pairs) -> "PeakPotential":
        return cls(peaks=tuple(Peak(position=x, strength=u) for x, u in pairs))

    @property
    def positions(self) -> List[float]:
        return [peak.position for peak in self.peaks]

    @property
    def strengths(self) -> List[complex]:
        return [peak.strength for peak in self.peaks]


class EndpointSpec(BaseModel):
    """Either a fixed final point x_b or a free (integrated) endpoint."""
    model_config = ConfigDict(frozen=True)

    mode: Literal["fixed", "free"]
    x_b: Optional[float] = None

    @model_validator(mode="after")
    def _one_variant(self) -> "EndpointSpec":
        if self.mode == "fixed" and self.x_b is None:
            raise ValueError("a fixed endpoint needs x_b")
        if self.mode == "free" and self.x_b is not None:
            raise ValueError("a free endpoint takes no x_b")
        return self

    @classmethod
    def fixed(cls, x_b: float) -> "EndpointSpec":
        return cls(mode="fixed", x_b=x_b)

    @classmethod
    def free(cls) -> "EndpointSpec":
        return cls(mode="free")


class AtomicDensity(BaseModel):
    """
    A measure on L ≥ 0 made of a point mass at L = 0 and a density for L > 0.
    `continuous_mass` is the integral of the density when it is known in closed form.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    atom: float = Field(..., ge=0.0, description="Probability mass at L = 0.")
    density: Callable[[float], float] = Field(..., exclude=True)
    continuous_mass: Optional[float] = Field(None, ge=0.0)

    def __call__(self, L: float) -> float:
        return self.density(L) if L >= 0.0 else 0.0

    @property
    def total_mass(self) -> float:
        if self.continuous_mass is None:
            mass, _ = quad(self.density, 0.0, np.inf, limit=200)
            return self.atom + mass
        return self.atom + self.continuous_mass


class AtomicDensityValue(BaseModel):
    """An atomic density evaluated at one L: the continuous part there plus the atom weight."""
    model_config = ConfigDict(frozen=True)

    density: float = Field(..., ge=0.0)
    atom: float = Field(..., ge=0.0)


class PathSample(BaseModel):
    """A time-discretized trajectory x(τ_k) on a uniform grid."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    times: np.ndarray
    positions: np.ndarray
    model: WalkModel
    seed: int

    @model_validator(mode="after")
    def _consistent_grid(self) -> "PathSample":
        if self.times.shape != self.positions.shape or self.times.ndim != 1:
            raise ValueError("times and positions must be 1-D arrays of equal length")
        if len(self.times) < 2 or np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly increasing with at least one step")
        return self

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def dt(self) -> float:
        return float(self.times[-1] - self.times[0]) / self.n_steps


class LocalTimeProfile(BaseModel):
    """
    Binned occupation density L(x_i). Time spent left of the first edge and
    right of the last edge is kept in `underflow`/`overflow`.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    bin_edges: np.ndarray
    values: np.ndarray
    total_time: float = Field(..., gt=0.0)
    underflow: float = 0.0
    overflow: float = 0.0

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    def occupation(self) -> float:
        """Σ L_i h_i plus the time spent outside the grid; equals total_time."""
        return float(np.sum(self.values * self.widths)) + self.underflow + self.overflow


class MCEstimate(BaseModel):
    """Ensemble mean with its standard error."""
    mean: float
    std_error: float = Field(..., ge=0.0)
    n_samples: int = Field(..., ge=2)

    def within(self, target: float, n_sigma: float = 3.0, slack: float = 0.0) -> bool:
        return abs(self.mean - target) <= n_sigma * self.std_error + slack


class MCConfig(BaseModel):
    """Monte Carlo run configuration shared by the estimators."""
    model_config = ConfigDict(frozen=True)

    model: WalkModel
    t: float = Field(1.0, gt=0.0)
    n_steps: int = Field(1000, ge=1)
    n_paths: int = Field(10000, ge=2)
    x_a: float = 0.0
    endpoint: EndpointSpec = Field(default_factory=EndpointSpec.free)
    x: float = 0.0
    L_bins: Optional[Tuple[float, ...]] = None
    seed: int = Field(0, ge=0, lt=2**64)
    epsilon: Optional[float] = Field(None, gt=0.0)
    bin_width: Optional[float] = Field(None, gt=0.0)

    @property
    def dt(self) -> float:
        return self.t / self.n_steps

    @property
    def length_scale(self) -> float:
        return (self.model.diffusion * self.t) ** (1.0 / self.model.lam)

    def resolved_bin_width(self, fraction: float = 1.0 / 25.0) -> float:
        return self.bin_width if self.bin_width is not None else fraction * self.length_scale


class OnePointHistogram(BaseModel):
    """Histogram of L̂(x) with the L̂ = 0 mass reported separately as the atom."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    L_edges: np.ndarray
    density: np.ndarray
    std_error: np.ndarray
    atom: MCEstimate
    n_paths: int
    accepted_paths: int


class TailFit(BaseModel):
    """Log-log fit P ≈ c / |x|^{1+λ} over a dimensionless window."""
    exponent: float
    constant: float
    asymptote_constant: float
    x_bar_range: Tuple[float, float]

    @property
    def constant_ratio(self) -> float:
        return self.constant / self.asymptote_constant if self.asymptote_constant else math.inf


class QuadratureSettings(BaseModel):
    """
    The `quadrature` section of main_config.yaml. `evaluation_budget` caps the
    integrand evaluations spent on one grid point; null means unlimited.
    """
    model_config = ConfigDict(frozen=True)

    rtol: float = Field(1e-10, gt=0.0, lt=1.0)
    limit: int = Field(500, ge=1)
    limlst: int = Field(200, ge=3)
    evaluation_budget: Optional[int] = Field(None, ge=1)


class GridSpec(BaseModel):
    """Inclusive grid `min:max:count`; count is the number of points."""
    model_config = ConfigDict(frozen=True)

    start: float
    stop: float
    count: int = Field(..., ge=2)

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like min:max:count, got '{text}'")
        return cls(start=float(parts[0]), stop=float(parts[1]), count=int(parts[2]))

    def points(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


class RunConfig(BaseModel):
    """A fully validated CLI invocation."""
    model_config = ConfigDict(frozen=True)

    command: Literal["density", "resolvent", "ltdist", "moment", "simulate", "verify"]
    model: Optional[WalkModel] = None
    t: Optional[float] = Field(None, gt=0.0)
    E: Optional[float] = Field(None, gt=0.0)
    grid: Optional[GridSpec] = None
    x: Optional[float] = None
    x2: Optional[float] = None
    x_a: float = 0.0
    x_b: Optional[float] = None
    endpoint: Literal["fixed", "free"] = "free"
    order: Literal[1, 2] = 1
    paths: Optional[int] = Field(None, ge=1)
    steps: Optional[int] = Field(None, ge=1)
    seed: int = Field(0, ge=0)
    epsilon: Optional[float] = Field(None, gt=0.0)
    estimate: Literal["paths", "distribution", "moment"] = "paths"
    scaled: bool = False
    output: Optional[str] = None
    format: Literal["csv", "json"] = "csv"
    svg: Optional[str] = None
    suite: Literal["analytic", "montecarlo", "all"] = "analytic"
    tolerance: Literal["default", "strict", "loose"] = "default"

    @model_validator(mode="after")
    def _required_fields(self) -> "RunConfig":
        needs_model = self.command != "verify"
        if needs_model and self.model is None:
            raise ValueError(f"'{self.command}' needs --lambda")
        if self.command in ("density", "ltdist", "moment", "simulate") and self.t is None:
            raise ValueError(f"'{self.command}' needs --time")
        if self.command == "resolvent" and self.E is None:
            raise ValueError("'resolvent' needs --energy")
        if self.command in ("density", "resolvent", "ltdist", "moment") and self.grid is None:
            raise ValueError(f"'{self.command}' needs --grid")
        if self.command == "simulate" and (self.paths is None or self.steps is None):
            raise ValueError("'simulate' needs --paths and --steps")
        if self.endpoint == "fixed" and self.command in ("ltdist", "moment", "simulate") and self.x_b is None:
            raise ValueError("a fixed endpoint needs --xb")
        if self.command != "verify" and self.output is None:
            raise ValueError(f"'{self.command}' needs --output")
        return self

    def endpoint_spec(self) -> EndpointSpec:
        return EndpointSpec.fixed(self.x_b) if self.endpoint == "fixed" else EndpointSpec.free()


class CurveFile(BaseModel):
    """Tabular output: a header of column names and rows of numbers."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    columns: List[str]
    rows: np.ndarray
    metadata: dict = Field(default_factory=dict)

    @model_validator(mode="after")
    def _rectangular(self) -> "CurveFile":
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.columns):
            raise ValueError("rows must be a 2-D array with one column per header entry")
        if not np.all(np.isfinite(self.rows)):
            raise ValueError("curve data must be finite")
        return self
