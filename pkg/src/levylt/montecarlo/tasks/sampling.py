import logging
import math
from typing import Optional, Tuple

import numpy as np

from levylt.core.schemas import ConfigurationError, MCConfig, PathSample, WalkModel

logger = logging.getLogger(__name__)


def path_rng(seed: int, path_index: int) -> np.random.Generator:
    """
    The random stream of one path. SeedSequence([seed, index]) gives independent
    substreams, so a path's draws do not depend on how paths are scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence([seed, path_index]))


def standard_symmetric_stable(alpha: float, rng: np.random.Generator, size=None):
    """
    Chambers–Mallows–Stuck draw of a symmetric α-stable variable with
    characteristic function exp(−|p|^α):

        S = sin(αU) / cos(U)^{1/α} · (cos((1 − α)U) / W)^{(1 − α)/α},

    U uniform on (−π/2, π/2), W standard exponential.
    """
    U = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    W = rng.standard_exponential(size)
    return (
        np.sin(alpha * U) / np.cos(U) ** (1.0 / alpha)
        * (np.cos((1.0 - alpha) * U) / W) ** ((1.0 - alpha) / alpha)
    )


def sample_increment(dt: float, model: WalkModel, rng: np.random.Generator, size=None):
    """
    Increments of the walk over a time step dt, distributed per P_λ(·, dt).
    λ = 2 draws N(0, 2 D dt), λ = 1 a Cauchy variable of width D dt, other λ
    the CMS variable scaled by (D dt)^{1/λ}.
    """
    if dt <= 0.0:
        raise ConfigurationError(f"time step must be > 0, got {dt}", "sample_increment")
    D = model.diffusion
    if model.is_gaussian:
        return rng.normal(0.0, math.sqrt(2.0 * D * dt), size)
    if model.is_cauchy:
        return rng.standard_cauchy(size) * (D * dt)
    return (D * dt) ** (1.0 / model.lam) * standard_symmetric_stable(model.lam, rng, size)


def _time_grid(t: float, n_steps: int) -> np.ndarray:
    return np.linspace(0.0, t, n_steps + 1)


def _free_positions(
    t: float, n_steps: int, x_a: float, model: WalkModel, rng: np.random.Generator
) -> np.ndarray:
    positions = np.empty(n_steps + 1)
    positions[0] = x_a
    np.cumsum(sample_increment(t / n_steps, model, rng, n_steps), out=positions[1:])
    positions[1:] += x_a
    return positions


def simulate_path(
    t: float,
    n_steps: int,
    x_a: float,
    model: WalkModel,
    seed: int,
    path_index: int = 0,
) -> PathSample:
    """A free Lévy path started at x_a: cumulative sum of i.i.d. increments."""
    if n_steps < 1 or t <= 0.0:
        raise ConfigurationError(
            f"need t > 0 and n_steps ≥ 1, got t={t}, n_steps={n_steps}", "simulate_path"
        )
    rng = path_rng(seed, path_index)
    return PathSample(
        times=_time_grid(t, n_steps),
        positions=_free_positions(t, n_steps, x_a, model, rng),
        model=model,
        seed=seed,
    )


def bridge_from_normals(
    t: float, x_a: float, x_b: float, diffusion: float, normals: np.ndarray
) -> np.ndarray:
    """
    Sequential conditional sampling of Brownian bridges (free variance 2Ds at
    time s). `normals` has shape (paths, n_steps − 1); rows are independent
    bridges. From x_k at τ_k with T = t − τ_k left, the next point is Gaussian
    with mean x_k + (x_b − x_k) δ/T and variance 2Dδ(T − δ)/T; the last point is x_b.
    """
    normals = np.atleast_2d(normals)
    n_paths, inner = normals.shape
    n_steps = inner + 1
    delta = t / n_steps
    positions = np.empty((n_paths, n_steps + 1))
    positions[:, 0] = x_a
    for k in range(inner):
        remaining = t - k * delta
        current = positions[:, k]
        mean = current + (x_b - current) * delta / remaining
        std = math.sqrt(2.0 * diffusion * delta * (remaining - delta) / remaining)
        positions[:, k + 1] = mean + std * normals[:, k]
    positions[:, n_steps] = x_b
    return positions


def brownian_bridge_path(
    t: float,
    n_steps: int,
    x_a: float,
    x_b: float,
    D: float,
    seed: int,
    path_index: int = 0,
) -> PathSample:
    """A Brownian path from x_a at time 0 to x_b at time t, both endpoints exact."""
    if n_steps < 1 or t <= 0.0:
        raise ConfigurationError(
            f"need t > 0 and n_steps ≥ 1, got t={t}, n_steps={n_steps}", "brownian_bridge_path"
        )
    rng = path_rng(seed, path_index)
    positions = bridge_from_normals(t, x_a, x_b, D, rng.standard_normal((1, n_steps - 1)))[0]
    return PathSample(
        times=_time_grid(t, n_steps),
        positions=positions,
        model=WalkModel(lam=2.0, diffusion=D),
        seed=seed,
    )


def check_endpoint_support(config: MCConfig) -> None:
    """
    Fixed endpoints are exact only through the Brownian bridge; for λ < 2
    paths are accepted in a window |x(t) − x_b| ≤ ε that must be given.
    """
    if config.endpoint.mode == "fixed" and not config.model.is_gaussian and config.epsilon is None:
        raise ConfigurationError(
            f"fixed endpoint with λ={config.model.lam} needs an acceptance window epsilon",
            "estimate_onepoint_distribution",
        )


def sample_batch(config: MCConfig, start: int, stop: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Positions of paths start … stop−1 as an array of shape (paths, n_steps + 1)
    together with the mask of paths accepted for the configured endpoint.
    """
    check_endpoint_support(config)
    n = stop - start
    N = config.n_steps
    endpoint = config.endpoint
    if endpoint.mode == "fixed" and config.model.is_gaussian:
        normals = np.empty((n, N - 1))
        for row, index in enumerate(range(start, stop)):
            normals[row] = path_rng(config.seed, index).standard_normal(N - 1)
        positions = bridge_from_normals(config.t, config.x_a, endpoint.x_b, config.model.diffusion, normals)
        return positions, np.ones(n, dtype=bool)

    positions = np.empty((n, N + 1))
    for row, index in enumerate(range(start, stop)):
        positions[row] = _free_positions(config.t, N, config.x_a, config.model, path_rng(config.seed, index))
    if endpoint.mode == "fixed":
        accepted = np.abs(positions[:, -1] - endpoint.x_b) <= config.epsilon
    else:
        accepted = np.ones(n, dtype=bool)
    return positions, accepted


def default_epsilon(config: MCConfig, fraction: float) -> Optional[float]:
    """ε = fraction · (Dt)^{1/λ} for λ < 2 fixed-endpoint runs, None otherwise."""
    if config.endpoint.mode != "fixed" or config.model.is_gaussian:
        return None
    epsilon = fraction * config.length_scale
    logger.warning(
        f"Fixed endpoint with λ={config.model.lam}: accepting |x(t) − x_b| ≤ {epsilon:.4g}; "
        "estimates carry an O(ε) bias"
    )
    return epsilon
