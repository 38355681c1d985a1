"""
One handler per CLI command. Each turns a validated RunConfig into the
curve files it produces; writing them is left to the caller.
"""
import asyncio
import logging
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from levylt.analytic.localtime import (
    LOCAL_TIME_RTOL,
    mean_fixed,
    mean_free,
    second_moment_gauss,
    w_fixed,
    w_free,
    w_gauss_fixed,
    w_gauss_free,
)
from levylt.analytic.resolvent import resolvent, resolvent_length_scale
from levylt.analytic.stable import density_at, length_scale
from levylt.core.schemas import (
    ConfigurationError,
    CurveFile,
    DomainError,
    GridSpec,
    MCConfig,
    QuadratureSettings,
    RunConfig,
    SpaceTimePoint,
)
from levylt.core.utils.decorators import EvaluationBudget
from levylt.core.utils.quadrature import configure_limits
from levylt.cli.serializers import companion_path
from levylt.montecarlo.pipeline import SimulationPipeline
from levylt.montecarlo.tasks import default_epsilon, jackknife, local_time_profile

logger = logging.getLogger(__name__)

Output = Tuple[CurveFile, Path]


def _metadata(config: RunConfig, **extra: Any) -> Dict[str, Any]:
    meta: Dict[str, Any] = {"command": config.command, "scaled": config.scaled}
    if config.model is not None:
        meta["lambda"] = config.model.lam
        meta["diffusion"] = config.model.diffusion
    for key in ("t", "E", "x", "x2", "x_b", "order", "paths", "steps", "seed", "epsilon"):
        value = getattr(config, key)
        if value is not None:
            meta[key] = value
    meta["x_a"] = config.x_a
    if config.command in ("ltdist", "moment", "simulate"):
        meta["endpoint"] = config.endpoint
    meta.update(extra)
    return meta


def quadrature_settings(settings: Dict[str, Any]) -> QuadratureSettings:
    """Validates the `quadrature` config section and applies its QUADPACK limits."""
    try:
        quadrature = QuadratureSettings(**(settings.get("quadrature") or {}))
    except ValidationError as e:
        raise ConfigurationError(f"invalid quadrature settings: {e}", "quadrature_settings") from e
    configure_limits(quadrature.limit, quadrature.limlst)
    return quadrature


def _budget(quadrature: QuadratureSettings) -> Optional[EvaluationBudget]:
    if quadrature.evaluation_budget is None:
        return None
    return EvaluationBudget(quadrature.evaluation_budget)


def _tabulate(points: np.ndarray, f: Callable[[float], float]) -> np.ndarray:
    return np.array([f(float(p)) for p in points])


def density_curve(config: RunConfig, quadrature: QuadratureSettings) -> CurveFile:
    """P_λ(x, t) on the grid; scaled: P̄(x̄) = ℓ P(x̄ ℓ, t), ℓ = (Dt)^{1/λ}."""
    model, t = config.model, config.t
    grid = config.grid.points()

    def density(x: float) -> float:
        point = SpaceTimePoint(x=x, t=t)
        return density_at(point, model, rtol=quadrature.rtol, budget=_budget(quadrature))

    if config.scaled:
        ell = length_scale(t, model)
        values = _tabulate(grid, lambda xb: ell * density(xb * ell))
        columns = ["x_bar", "P_bar"]
    else:
        values = _tabulate(grid, density)
        columns = ["x", "P"]
    return CurveFile(columns=columns, rows=np.column_stack([grid, values]), metadata=_metadata(config))


def resolvent_curve(config: RunConfig, quadrature: QuadratureSettings) -> CurveFile:
    """R_λ(x, −E) on the grid; scaled: R̄(x̄) = ℓ_E E R(x̄ ℓ_E), ℓ_E = (D/E)^{1/λ}."""
    model, E = config.model, config.E
    grid = config.grid.points()

    def value(x: float) -> float:
        return resolvent(x, E, model, rtol=quadrature.rtol, budget=_budget(quadrature))

    if config.scaled:
        ell = resolvent_length_scale(E, model)
        values = _tabulate(grid, lambda xb: ell * E * value(xb * ell))
        columns = ["x_bar", "R_bar"]
    else:
        values = _tabulate(grid, value)
        columns = ["x", "R"]
    return CurveFile(columns=columns, rows=np.column_stack([grid, values]), metadata=_metadata(config))


def _distribution_at(
    config: RunConfig, quadrature: QuadratureSettings
) -> Callable[[float], Tuple[float, float]]:
    model, t = config.model, config.t
    D = model.diffusion
    x = config.x if config.x is not None else config.x_a
    x_a = config.x_a
    fixed = config.endpoint == "fixed"
    if model.is_gaussian:
        if fixed:
            def gauss_fixed(L: float) -> Tuple[float, float]:
                value = w_gauss_fixed(L, x, x_a, config.x_b, t, D)
                return value.density, value.atom
            return gauss_fixed

        def gauss_free(L: float) -> Tuple[float, float]:
            value = w_gauss_free(L, x, x_a, t, D)
            return value.density, value.atom
        return gauss_free

    if x != x_a:
        raise DomainError(
            "for λ < 2 the one-point distribution is available at x = x_a only", "ltdist", parameter="x"
        )
    rtol = max(quadrature.rtol, LOCAL_TIME_RTOL)
    if fixed:
        if config.x_b != x_a:
            raise DomainError(
                "for λ < 2 the fixed-endpoint distribution needs x_b = x_a", "ltdist", parameter="xb"
            )
        return lambda L: (w_fixed(L, t, model, rtol=rtol, budget=_budget(quadrature)), 0.0)
    return lambda L: (w_free(L, t, model, rtol=rtol, budget=_budget(quadrature)), 0.0)


def ltdist_curve(config: RunConfig, quadrature: QuadratureSettings) -> CurveFile:
    """
    One-point local-time distribution on an L grid: columns L, W and the atom
    weight at L = 0. Scaled: L̄ = ℓL/t, W̄ = tW/ℓ.
    """
    t = config.t
    grid = config.grid.points()
    evaluate = _distribution_at(config, quadrature)
    ell = length_scale(t, config.model) if config.scaled else None
    rows = []
    for point in grid:
        L = point * t / ell if ell else point
        density, atom = evaluate(float(L))
        rows.append([point, density * t / ell if ell else density, atom])
    columns = ["L_bar", "W_bar", "atom"] if ell else ["L", "W", "atom"]
    return CurveFile(columns=columns, rows=np.array(rows), metadata=_metadata(config))


def moment_curve(config: RunConfig, quadrature: QuadratureSettings) -> CurveFile:
    """
    First (any λ) or second (λ = 2) moment of the local time on an x grid.
    Scaled: x̄ = (x − x_a)/ℓ, μ̄ = (ℓ/t)^order μ.
    """
    model, t = config.model, config.t
    x_a = config.x_a
    grid = config.grid.points()
    fixed = config.endpoint == "fixed"
    if config.order == 2 and not model.is_gaussian:
        raise DomainError("second moments are available for λ = 2 only", "moment", parameter="order")
    ell = length_scale(t, model) if config.scaled else None

    def moment(x: float) -> float:
        if config.order == 2:
            x2 = config.x2 if config.x2 is not None else x
            return second_moment_gauss(x, x2, x_a, config.endpoint_spec(), t, model.diffusion)
        if fixed:
            return mean_fixed(x, x_a, config.x_b, t, model, rtol=quadrature.rtol, budget=_budget(quadrature))
        return mean_free(x, x_a, t, model, rtol=quadrature.rtol, budget=_budget(quadrature))

    rows = []
    for point in grid:
        x = x_a + point * ell if ell else point
        value = moment(float(x))
        rows.append([point, value * (ell / t) ** config.order if ell else value])
    columns = ["x_bar", "mu_bar"] if ell else ["x", "mu"]
    return CurveFile(columns=columns, rows=np.array(rows), metadata=_metadata(config))


def mc_config(config: RunConfig, settings: Dict[str, Any]) -> MCConfig:
    """The Monte Carlo record of a `simulate` run, with ε defaulted for λ < 2 fixed endpoints."""
    mc = MCConfig(
        model=config.model,
        t=config.t,
        n_steps=config.steps,
        n_paths=max(2, config.paths),
        x_a=config.x_a,
        endpoint=config.endpoint_spec(),
        x=config.x if config.x is not None else config.x_a,
        seed=config.seed,
        epsilon=config.epsilon,
    )
    if mc.epsilon is None:
        fraction = settings.get("montecarlo", {}).get("epsilon_fraction", 0.05)
        epsilon = default_epsilon(mc, fraction)
        if epsilon is not None:
            mc = mc.model_copy(update={"epsilon": epsilon})
    return mc


def _profile_curve(paths, edges: np.ndarray, meta: Dict[str, Any]) -> CurveFile:
    profiles = [local_time_profile(path, edges) for path in paths]
    centers = profiles[0].centers
    columns = ["x"] + [f"L_{index}" for index in range(len(profiles))]
    rows = np.column_stack([centers] + [profile.values for profile in profiles])
    return CurveFile(columns=columns, rows=rows, metadata=meta)


def simulate_outputs(config: RunConfig, settings: Dict[str, Any], workers: int) -> List[Output]:
    """
    `--estimate paths`: the first --paths trajectories (columns tau, x_0, x_1, …),
    plus their local-time profiles on --grid bin edges in a companion file.
    `--estimate distribution`: L̂ histogram; the first row (0, 0, atom, error)
    carries the L̂ = 0 mass. `--estimate moment`: mean of L̂ (or L̂(x)L̂(x2)).
    """
    mc = mc_config(config, settings)
    pipeline = SimulationPipeline(mc, settings, workers)
    output = Path(config.output)
    meta = _metadata(config)

    if config.estimate == "paths":
        paths = pipeline.paths(config.paths)
        columns = ["tau"] + [f"x_{index}" for index in range(len(paths))]
        rows = np.column_stack([paths[0].times] + [path.positions for path in paths])
        outputs = [(CurveFile(columns=columns, rows=rows, metadata=meta), output)]
        if config.grid is not None:
            profile = _profile_curve(paths, config.grid.points(), meta)
            outputs.append((profile, companion_path(output, "profile")))
        return outputs

    if config.estimate == "distribution":
        histogram = asyncio.run(pipeline.onepoint_distribution())
        edges = histogram.L_edges
        rows = [[0.0, 0.0, histogram.atom.mean, histogram.atom.std_error]]
        rows += [
            [lo, hi, d, e]
            for lo, hi, d, e in zip(edges[:-1], edges[1:], histogram.density, histogram.std_error)
        ]
        meta.update(atom=histogram.atom.mean, accepted_paths=histogram.accepted_paths)
        curve = CurveFile(columns=["L_lo", "L_hi", "density", "std_error"], rows=np.array(rows), metadata=meta)
        return [(curve, output)]

    if config.order == 2:
        x = mc.x
        x2 = config.x2 if config.x2 is not None else x
        estimate = asyncio.run(pipeline.moments(2, [x, x2]))
        rows = np.array([[x, x2, estimate.mean, estimate.std_error]])
        curve = CurveFile(columns=["x", "x2", "mean", "std_error"], rows=rows, metadata=meta)
        return [(curve, output)]

    points = config.grid.points() if config.grid is not None else np.array([mc.x])
    samples, _ = asyncio.run(pipeline.sample_local_times([float(p) for p in points]))
    rows = []
    for column, x in enumerate(points):
        estimate = jackknife(samples[:, column])
        rows.append([x, estimate.mean, estimate.std_error])
    curve = CurveFile(columns=["x", "mean", "std_error"], rows=np.array(rows), metadata=meta)
    return [(curve, output)]


CURVE_HANDLERS: Dict[str, Callable[[RunConfig, QuadratureSettings], CurveFile]] = {
    "density": density_curve,
    "resolvent": resolvent_curve,
    "ltdist": ltdist_curve,
    "moment": moment_curve,
}


def execute(config: RunConfig, settings: Dict[str, Any], workers: int) -> List[Output]:
    """Runs a curve or simulate command and returns (curve, path) pairs to write."""
    logger.info(f"Running '{config.command}'")
    if config.command == "simulate":
        return simulate_outputs(config, settings, workers)
    handler = CURVE_HANDLERS[config.command]
    return [(handler(config, quadrature_settings(settings)), Path(config.output))]


def single_row(config: RunConfig, point: float, quadrature: Optional[QuadratureSettings] = None) -> np.ndarray:
    """The first row a curve command would emit for a one-point grid."""
    one_point = config.model_copy(update={"grid": GridSpec(start=point, stop=point, count=2)})
    return CURVE_HANDLERS[config.command](one_point, quadrature or QuadratureSettings()).rows[0]
