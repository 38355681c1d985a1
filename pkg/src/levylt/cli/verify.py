"""
The verification suite behind `levylt verify`.

Analytic checks compare independent numerical routes against each other and
against closed forms; the Monte Carlo checks compare simulated ensembles with
the analytic curves, allowing for the known discretization bias of the binned
estimator. Every tolerance is multiplied by the scale of the chosen
`--tolerance` level.
"""
import asyncio
import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel
from scipy.stats import kstest

from levylt.analytic.localtime import (
    local_time_moment_from_distribution,
    mean_fixed,
    mean_free,
    mean_free_sum_rule,
    onepoint_density_E,
    second_moment_gauss,
    w_fixed,
    w_gauss_fixed,
)
from levylt.analytic.resolvent import resolvent, resolvent_length_scale, resolvent_tail_mass
from levylt.analytic.stable import fit_tail, length_scale, recurrence_probability, stable_cdf, stable_density
from levylt.cli.commands import quadrature_settings, single_row
from levylt.cli.figures import figure_recipes
from levylt.core.resources import load_config
from levylt.core.schemas import EndpointSpec, MCConfig, QuadratureSettings, RunConfig, WalkModel
from levylt.core.utils import finite_integral, semi_infinite_integral
from levylt.montecarlo.pipeline import SimulationPipeline
from levylt.montecarlo.tasks import (
    brownian_estimator_spread,
    expected_bin_occupation,
    jackknife,
    smeared_bin_mass,
)

logger = logging.getLogger(__name__)


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteContext:
    scale: float
    settings: Dict[str, Any]
    workers: Optional[int] = None

    @property
    def mc(self) -> Dict[str, Any]:
        return self.settings.get("verify", {}).get("montecarlo", {})

    @property
    def quadrature(self) -> QuadratureSettings:
        return quadrature_settings(self.settings)


Check = Callable[[SuiteContext], CheckResult]


def _relative(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


def _worst(name: str, errors: List[Tuple[str, float]], limit: float) -> CheckResult:
    label, error = max(errors, key=lambda item: item[1])
    return CheckResult(
        name=name,
        passed=error <= limit,
        detail=f"max rel. error {error:.2e} at {label} (limit {limit:.0e}, {len(errors)} cases)",
    )


# ---------------------------------------------------------------- analytic --

def check_density_closed_forms(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.0, 2.0):
        model = WalkModel(lam=lam)
        for x_bar in np.linspace(-5.0, 5.0, 21):
            exact = stable_density(x_bar, 1.0, model)
            generic = stable_density(x_bar, 1.0, model, method="quadrature")
            errors.append((f"λ={lam:g}, x̄={x_bar:g}", _relative(generic, exact)))
    return _worst("density closed forms", errors, 1e-7 * ctx.scale)


def check_recurrence_probability(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.1, 1.25, 1.5, 1.75):
        model = WalkModel(lam=lam)
        value = stable_density(0.0, 1.0, model, method="quadrature")
        errors.append((f"λ={lam:g}", _relative(value, recurrence_probability(1.0, model))))
    return _worst("recurrence probability", errors, 1e-7 * ctx.scale)


def check_resolvent_routes(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.0, 1.5, 2.0):
        model = WalkModel(lam=lam)
        for x in (0.25, 1.0, 4.0):
            for E in (0.5, 2.0):
                values = [
                    resolvent(x, E, model, method=route) for route in ("momentum", "imag_axis", "auto")
                ]
                spread = max(_relative(a, b) for a in values for b in values)
                errors.append((f"λ={lam:g}, x={x:g}, E={E:g}", spread))
    return _worst("resolvent routes", errors, 1e-6 * ctx.scale)


def check_resolvent_integral(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.25, 1.5, 2.0):
        model = WalkModel(lam=lam)
        for E in (0.5, 1.0, 2.0):
            ell = resolvent_length_scale(E, model)
            cut = 100.0 * ell
            inner = finite_integral(
                lambda x: resolvent(x, E, model), 0.0, cut, rtol=1e-9,
                points=[0.1 * ell, ell, 10.0 * ell], label="resolvent_integral",
            )
            tail = 0.0 if model.is_gaussian else resolvent_tail_mass(cut, E, model)
            errors.append((f"λ={lam:g}, E={E:g}", _relative(2.0 * (inner + tail), 1.0 / E)))
    return _worst("∫R dx = 1/E", errors, 1e-6 * ctx.scale)


def check_atom_mass(ctx: SuiteContext) -> CheckResult:
    rng = np.random.default_rng(int(ctx.mc.get("seed", 0)))
    errors = []
    for case in range(5):
        model = WalkModel(lam=(1.5, 2.0)[case % 2])
        x, x_a, x_b = rng.uniform(-2.0, 2.0, size=3)
        E = float(rng.uniform(0.5, 2.0))
        measure = onepoint_density_E(float(x), float(x_a), float(x_b), E, model)
        diagonal = resolvent(0.0, E, model)
        mass = measure.atom + semi_infinite_integral(
            measure.density, 0.0, rtol=1e-12, split=[diagonal], label="atom_mass",
        )
        direct = resolvent(float(x_b - x_a), E, model)
        errors.append((f"case {case} (λ={model.lam:g})", _relative(mass, direct)))
    return _worst("δ-atom mass bookkeeping", errors, 1e-10 * ctx.scale)


def check_distribution_normalization(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.25, 1.5, 2.0):
        model = WalkModel(lam=lam)
        for endpoint in ("fixed", "free"):
            mass = local_time_moment_from_distribution(0, 1.0, model, endpoint)
            errors.append((f"λ={lam:g} {endpoint}", abs(mass - 1.0)))
    return _worst("∫W dL = 1", errors, 1e-5 * ctx.scale)


def check_gaussian_moments(ctx: SuiteContext) -> CheckResult:
    model = WalkModel(lam=2.0)
    fixed, free = EndpointSpec.fixed(0.0), EndpointSpec.free()
    cases = [
        ("fixed ⟨L⟩", local_time_moment_from_distribution(1, 1.0, model, "fixed"),
         mean_fixed(0.0, 0.0, 0.0, 1.0, model), math.sqrt(math.pi) / 2.0),
        ("fixed ⟨L²⟩", local_time_moment_from_distribution(2, 1.0, model, "fixed"),
         second_moment_gauss(0.0, 0.0, 0.0, fixed, 1.0, 1.0), 1.0),
        ("free ⟨L⟩", local_time_moment_from_distribution(1, 1.0, model, "free"),
         mean_free(0.0, 0.0, 1.0, model), 1.0 / math.sqrt(math.pi)),
        ("free ⟨L²⟩", local_time_moment_from_distribution(2, 1.0, model, "free"),
         second_moment_gauss(0.0, 0.0, 0.0, free, 1.0, 1.0), 0.5),
    ]
    errors = [
        (label, max(_relative(from_w, exact), _relative(closed, exact)))
        for label, from_w, closed, exact in cases
    ]
    return _worst("Gaussian moments vs distribution", errors, 1e-8 * ctx.scale)


MEAN_CONFIGURATIONS = (
    (0.5, 0.0, 1.0),
    (-0.3, 0.0, 0.4),
    (1.2, 0.0, 0.0),
    (0.7, 0.2, -0.5),
    (2.0, 0.0, 1.5),
)


def check_dual_route_means(ctx: SuiteContext) -> CheckResult:
    errors = []
    for lam in (1.0, 2.0):
        model = WalkModel(lam=lam)
        for x, x_a, x_b in MEAN_CONFIGURATIONS:
            label = f"λ={lam:g}, (x, x_a, x_b)=({x:g}, {x_a:g}, {x_b:g})"
            errors.append((
                f"{label} fixed",
                _relative(mean_fixed(x, x_a, x_b, 1.0, model, method="quadrature"),
                          mean_fixed(x, x_a, x_b, 1.0, model)),
            ))
            errors.append((
                f"{label} free",
                _relative(mean_free(x, x_a, 1.0, model, method="quadrature"), mean_free(x, x_a, 1.0, model)),
            ))
    return _worst("dual-route first moments", errors, 1e-5 * ctx.scale)


def check_sum_rule(ctx: SuiteContext) -> CheckResult:
    errors = [
        (f"λ={lam:g}", _relative(mean_free_sum_rule(1.0, WalkModel(lam=lam)), 1.0)) for lam in (1.5, 2.0)
    ]
    return _worst("∫μ* dx = t", errors, 1e-4 * ctx.scale)


def check_flattening(ctx: SuiteContext) -> CheckResult:
    ranges = []
    for lam in (2.0, 1.5, 1.2, 1.05):
        model = WalkModel(lam=lam)
        values = [w_fixed(L, 1.0, model) for L in (0.0, 0.5, 1.0)]
        ranges.append(max(values) - min(values))
    decreasing = all(a > b for a, b in zip(ranges, ranges[1:]))
    detail = ", ".join(f"{r:.4g}" for r in ranges)
    return CheckResult(name="flattening toward λ = 1", passed=decreasing, detail=f"max−min of W: {detail}")


def check_tail_constants(ctx: SuiteContext) -> CheckResult:
    parts = []
    passed = True
    for lam in (1.0, 1.5):
        fit = fit_tail(1.0, WalkModel(lam=lam))
        error = _relative(fit.exponent, 1.0 + lam)
        passed &= error <= 0.02
        parts.append(f"λ={lam:g}: exponent {fit.exponent:.4f}, constant ratio {fit.constant_ratio:.4f}")
    return CheckResult(name="tail exponent audit", passed=passed, detail="; ".join(parts))


def _rebuilt_scaled_row(
    run: RunConfig, point: float, quadrature: QuadratureSettings
) -> Tuple[np.ndarray, np.ndarray]:
    """
    The scaled row emitted for `point` and the same row rebuilt from an
    unscaled evaluation with the rescaling formulas.
    """
    model, t = run.model, run.t
    unscaled = run.model_copy(update={"scaled": False})
    if run.command == "density":
        ell = length_scale(t, model)
        x, P = single_row(unscaled, point * ell, quadrature)
        expected = [x / ell, ell * P]
    elif run.command == "resolvent":
        ell = resolvent_length_scale(run.E, model)
        x, R = single_row(unscaled, point * ell, quadrature)
        expected = [x / ell, ell * run.E * R]
    elif run.command == "ltdist":
        ell = length_scale(t, model)
        L, W, atom = single_row(unscaled, point * t / ell, quadrature)
        expected = [ell * L / t, t * W / ell, atom]
    else:
        ell = length_scale(t, model)
        x, mu = single_row(unscaled, run.x_a + point * ell, quadrature)
        expected = [(x - run.x_a) / ell, (ell / t) ** run.order * mu]
    return single_row(run, point, quadrature), np.array(expected)


def check_figure_rescaling(ctx: SuiteContext) -> CheckResult:
    failures = []
    checked = 0
    quadrature = ctx.quadrature
    for recipe in figure_recipes(ctx.settings):
        for run in recipe.runs:
            if run.command == "simulate":
                continue
            grid = run.grid.points()
            point = float(grid[len(grid) // 3])
            emitted, expected = _rebuilt_scaled_row(run, point, quadrature)
            checked += 1
            if not np.allclose(emitted, expected, rtol=1e-9 * ctx.scale, atol=0.0):
                failures.append(f"{run.output} at {point:g}")
    detail = f"{checked} curves" + (f"; mismatches: {', '.join(failures)}" if failures else "")
    return CheckResult(name="figure data rescaling", passed=not failures, detail=detail)


ANALYTIC_CHECKS: List[Check] = [
    check_density_closed_forms,
    check_recurrence_probability,
    check_resolvent_routes,
    check_resolvent_integral,
    check_atom_mass,
    check_distribution_normalization,
    check_gaussian_moments,
    check_dual_route_means,
    check_sum_rule,
    check_flattening,
    check_tail_constants,
    check_figure_rescaling,
]


# ------------------------------------------------------------- Monte Carlo --

def _mc_config(ctx: SuiteContext, model: WalkModel, **overrides: Any) -> MCConfig:
    fields = dict(
        model=model,
        t=1.0,
        n_steps=int(ctx.mc.get("steps", 1000)),
        n_paths=int(ctx.mc.get("paths", 100000)),
        seed=int(ctx.mc.get("seed", 0)),
    )
    fields.update(overrides)
    return MCConfig(**fields)


def check_mc_mean_local_time(ctx: SuiteContext) -> CheckResult:
    """
    ⟨L̂(x)⟩ within n_sigma of μ*(x); the gap between the exact expectation of
    the binned estimator and μ* is added to the allowance.
    """
    n_sigma = float(ctx.mc.get("n_sigma", 3.0))
    points = [float(p) for p in ctx.mc.get("points", [0.0, 0.5, 1.0])]
    parts, passed = [], True
    for lam in (1.5, 2.0):
        config = _mc_config(ctx, WalkModel(lam=lam))
        pipeline = SimulationPipeline(config, ctx.settings, ctx.workers)
        samples, _ = asyncio.run(pipeline.sample_local_times(points))
        h = pipeline.bin_width
        for column, x in enumerate(points):
            estimate = jackknife(samples[:, column])
            exact = mean_free(x, 0.0, config.t, config.model)
            bias = abs(
                expected_bin_occupation(x - 0.5 * h, x + 0.5 * h, config.t, config.n_steps, 0.0, config.model)
                - exact
            )
            ok = estimate.within(exact, n_sigma, bias * ctx.scale)
            passed &= ok
            parts.append(
                f"λ={lam:g} x={x:g}: {estimate.mean:.4f}±{estimate.std_error:.4f} vs {exact:.4f}"
                f"{'' if ok else ' ✗'}"
            )
    return CheckResult(name="MC mean local time", passed=passed, detail="; ".join(parts))


def check_mc_bridge_histogram(ctx: SuiteContext) -> CheckResult:
    """
    λ = 2 bridge histogram of L̂(x_a) against W₂. L̂ carries the τ = 0 visit,
    a shift q = Δt/h, and resolves L only up to the spread of the binned
    estimator, so the analytic bin masses are W₂ shifted by q and smeared by
    that spread. A bin agrees within n_sigma standard errors; 95% of the bins must agree.
    """
    n_sigma = float(ctx.mc.get("n_sigma", 3.0))
    model = WalkModel(lam=2.0)
    config = _mc_config(ctx, model, endpoint=EndpointSpec.fixed(0.0))
    pipeline = SimulationPipeline(config, ctx.settings, ctx.workers)
    histogram = asyncio.run(pipeline.onepoint_distribution())
    h = pipeline.bin_width
    q = config.dt / h
    D = model.diffusion
    edges = histogram.L_edges
    upper = 8.0 * math.sqrt(config.t / D)

    def w(L: float) -> float:
        return w_gauss_fixed(L, 0.0, 0.0, 0.0, config.t, D).density

    def spread(L: float) -> float:
        return brownian_estimator_spread(L, config.dt, h, D)

    expected = np.array([
        smeared_bin_mass(w, lo, hi, q, spread, upper) / (hi - lo) for lo, hi in zip(edges[:-1], edges[1:])
    ])
    agree = int(np.count_nonzero(np.abs(histogram.density - expected) <= n_sigma * ctx.scale * histogram.std_error))
    fraction = agree / len(expected)
    return CheckResult(
        name="MC bridge histogram",
        passed=fraction >= 0.95,
        detail=f"{agree}/{len(expected)} bins within {n_sigma:g}σ, atom {histogram.atom.mean:.4f}",
    )


def check_mc_terminal_ks(ctx: SuiteContext) -> CheckResult:
    model = WalkModel(lam=1.5)
    config = _mc_config(ctx, model, n_paths=10000, n_steps=100)
    pipeline = SimulationPipeline(config, ctx.settings, ctx.workers)
    positions = asyncio.run(pipeline.terminal_positions())
    cdf = np.vectorize(lambda x: stable_cdf(float(x), config.t, model))
    result = kstest(positions, cdf)
    return CheckResult(
        name="MC terminal positions KS",
        passed=result.pvalue > 0.01,
        detail=f"D={result.statistic:.4f}, p={result.pvalue:.3f} over {len(positions)} paths",
    )


MONTECARLO_CHECKS: List[Check] = [
    check_mc_mean_local_time,
    check_mc_bridge_histogram,
    check_mc_terminal_ks,
]


def _run_check(check: Check, ctx: SuiteContext) -> CheckResult:
    name = check.__name__.removeprefix("check_").replace("_", " ")
    logger.info(f"Running check '{name}'")
    try:
        return check(ctx)
    except Exception as e:
        logger.error(f"Check '{name}' raised {type(e).__name__}: {e}", exc_info=True)
        return CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")


def run_suite(
    suite: str = "analytic",
    tolerance: str = "default",
    settings: Optional[Dict[str, Any]] = None,
    workers: Optional[int] = None,
) -> List[CheckResult]:
    settings = settings if settings is not None else load_config()
    scales = settings.get("verify", {}).get("tolerance_scales", {})
    ctx = SuiteContext(scale=float(scales.get(tolerance, 1.0)), settings=settings, workers=workers)
    checks: List[Check] = []
    if suite in ("analytic", "all"):
        checks += ANALYTIC_CHECKS
    if suite in ("montecarlo", "all"):
        checks += MONTECARLO_CHECKS
    results = [_run_check(check, ctx) for check in checks]
    failed = sum(not result.passed for result in results)
    logger.info(f"Verification finished: {len(results) - failed} passed, {failed} failed")
    return results


def render_table(results: List[CheckResult]) -> str:
    width = max(len(result.name) for result in results)
    lines = [f"{'CHECK'.ljust(width)}  RESULT  DETAIL"]
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{result.name.ljust(width)}  {status:<6}  {result.detail}")
    return "\n".join(lines) + "\n"
