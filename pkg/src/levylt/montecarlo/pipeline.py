import asyncio
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from levylt.core.resources import load_config, resolve_worker_count
from levylt.core.schemas import (
    ConfigurationError,
    LocalTimeProfile,
    MCConfig,
    MCEstimate,
    OnePointHistogram,
    PathSample,
)
from levylt.montecarlo.tasks import (
    brownian_bridge_path,
    check_endpoint_support,
    histogram_with_errors,
    jackknife,
    lattice_aligned_edges,
    local_time_at,
    occupation_counts,
    proportion,
    sample_batch,
    simulate_path,
)
from levylt.montecarlo.utils import RunningMoments

logger = logging.getLogger(__name__)

T = TypeVar("T")

MAX_ACCEPTANCE_TRIALS = 10000


class SimulationPipeline:
    """
    Runs a Monte Carlo configuration as fixed-size path batches executed in
    worker threads. Batch boundaries and per-path random streams depend only
    on the configuration, so every estimate is a pure function of (config,
    seed) whatever the worker count.
    """
    def __init__(
        self,
        config: MCConfig,
        settings: Optional[Dict[str, Any]] = None,
        workers: Optional[int] = None,
    ):
        settings = settings if settings is not None else load_config()
        self.config = config
        self.settings = settings.get("montecarlo", {})
        self.workers = workers or resolve_worker_count(settings)
        self.batch_size = int(self.settings.get("batch_size", 2000))
        check_endpoint_support(config)

    @property
    def bin_width(self) -> float:
        """Width h of the bin centred on the target point."""
        return self.config.resolved_bin_width(self.settings.get("bin_width_fraction", 1.0 / 25.0))

    def _batches(self) -> List[Tuple[int, int]]:
        n = self.config.n_paths
        return [(start, min(start + self.batch_size, n)) for start in range(0, n, self.batch_size)]

    async def _map_batches(self, work: Callable[[int, int], T], label: str) -> List[T]:
        """
        Runs `work(start, stop)` for every batch under a semaphore of
        `self.workers` threads; results come back in batch order.
        """
        semaphore = asyncio.Semaphore(self.workers)
        batches = self._batches()
        total = self.config.n_paths
        done = 0
        logger.info(
            f"--- Starting {label}: {total} paths × {self.config.n_steps} steps, "
            f"λ={self.config.model.lam}, {len(batches)} batches on {self.workers} workers ---"
        )

        async def run_one(start: int, stop: int) -> T:
            nonlocal done
            async with semaphore:
                result = await asyncio.to_thread(work, start, stop)
            done += stop - start
            logger.info(f"{label}: {done}/{total} paths ({100.0 * done / total:.0f}%)")
            return result

        results = await asyncio.gather(*(run_one(start, stop) for start, stop in batches))
        logger.info(f"--- Finished {label} ---")
        return list(results)

    async def sample_local_times(self, points: Sequence[float]) -> Tuple[np.ndarray, int]:
        """L̂ at each point for every accepted path, shape (accepted, len(points))."""
        width = self.bin_width
        dt = self.config.dt

        def work(start: int, stop: int) -> np.ndarray:
            positions, accepted = sample_batch(self.config, start, stop)
            kept = positions[accepted]
            return np.column_stack([local_time_at(kept, x, width, dt) for x in points])

        batches = await self._map_batches(work, "local-time sampling")
        samples = np.concatenate(batches, axis=0)
        if len(samples) < 2:
            raise ConfigurationError(
                f"only {len(samples)} of {self.config.n_paths} paths accepted; widen epsilon",
                "sample_local_times",
            )
        if self.config.endpoint.mode == "fixed" and not self.config.model.is_gaussian:
            logger.info(f"Accepted {len(samples)}/{self.config.n_paths} paths in the endpoint window")
        return samples, self.config.n_paths

    async def onepoint_distribution(self) -> OnePointHistogram:
        samples, n_paths = await self.sample_local_times([self.config.x])
        L = samples[:, 0]
        accepted = len(L)
        if self.config.L_bins is not None:
            edges = np.asarray(self.config.L_bins, dtype=float)
        else:
            edges = lattice_aligned_edges(
                self.config.dt / self.bin_width,
                int(self.settings.get("histogram_bins", 40)),
                int(self.settings.get("histogram_stride", 4)),
            )
        density, std_error = histogram_with_errors(L[L > 0.0], edges, accepted)
        return OnePointHistogram(
            L_edges=edges,
            density=density,
            std_error=std_error,
            atom=proportion(int(np.count_nonzero(L == 0.0)), accepted),
            n_paths=n_paths,
            accepted_paths=accepted,
        )

    async def moments(self, order: int, points: Sequence[float]) -> MCEstimate:
        """
        Ensemble average of L̂(x_1) … L̂(x_order); missing points repeat the
        last one, so order 2 with a single point gives <L̂(x)²>.
        """
        if order not in (1, 2):
            raise ConfigurationError(f"order must be 1 or 2, got {order}", "estimate_moments")
        if not points:
            raise ConfigurationError("at least one point is required", "estimate_moments")
        chosen = list(points[:order]) + [points[-1]] * max(0, order - len(points))
        samples, _ = await self.sample_local_times(chosen)
        return jackknife(np.prod(samples, axis=1))

    async def profile(self, bin_edges: np.ndarray) -> Tuple[LocalTimeProfile, np.ndarray]:
        """Mean local-time profile over the accepted paths and its standard error per bin."""
        edges = np.asarray(bin_edges, dtype=float)
        widths = np.diff(edges)
        dt = self.config.dt

        def work(start: int, stop: int) -> Tuple[RunningMoments, RunningMoments]:
            positions, accepted = sample_batch(self.config, start, stop)
            counts, underflow, overflow = occupation_counts(positions[accepted], edges)
            outside = np.column_stack([underflow, overflow]) * dt
            return RunningMoments.from_samples(dt * counts / widths), RunningMoments.from_samples(outside)

        values, outside = RunningMoments(), RunningMoments()
        for batch_values, batch_outside in await self._map_batches(work, "profile ensemble"):
            values = values.merge(batch_values)
            outside = outside.merge(batch_outside)
        if values.count < 2:
            raise ConfigurationError("too few accepted paths for a profile ensemble", "ensemble_profile")
        mean = LocalTimeProfile(
            bin_edges=edges,
            values=np.asarray(values.mean),
            total_time=self.config.t,
            underflow=float(outside.mean[0]),
            overflow=float(outside.mean[1]),
        )
        return mean, np.asarray(values.std_error)

    async def terminal_positions(self) -> np.ndarray:
        def work(start: int, stop: int) -> np.ndarray:
            positions, accepted = sample_batch(self.config, start, stop)
            return positions[accepted, -1]

        return np.concatenate(await self._map_batches(work, "terminal positions"))

    def paths(self, count: Optional[int] = None) -> List[PathSample]:
        """The first `count` paths of the ensemble as PathSample objects."""
        config = self.config
        count = config.n_paths if count is None else count
        if config.endpoint.mode == "fixed" and config.model.is_gaussian:
            return [
                brownian_bridge_path(
                    config.t, config.n_steps, config.x_a, config.endpoint.x_b,
                    config.model.diffusion, config.seed, index,
                )
                for index in range(count)
            ]
        if config.endpoint.mode == "fixed":
            # First `count` paths that end inside the acceptance window.
            accepted: List[PathSample] = []
            index = 0
            while len(accepted) < count:
                if index >= MAX_ACCEPTANCE_TRIALS * count:
                    raise ConfigurationError(
                        f"fewer than {count} of {index} paths ended within ε={config.epsilon} of x_b",
                        "simulate",
                    )
                path = simulate_path(config.t, config.n_steps, config.x_a, config.model, config.seed, index)
                if abs(path.positions[-1] - config.endpoint.x_b) <= config.epsilon:
                    accepted.append(path)
                index += 1
            return accepted
        return [
            simulate_path(config.t, config.n_steps, config.x_a, config.model, config.seed, index)
            for index in range(count)
        ]


def estimate_onepoint_distribution(
    config: MCConfig, settings: Optional[Dict[str, Any]] = None, workers: Optional[int] = None
) -> OnePointHistogram:
    """Histogram of L̂(config.x) with the L̂ = 0 mass as a separate atom estimate."""
    pipeline = SimulationPipeline(config, settings, workers)
    return asyncio.run(pipeline.onepoint_distribution())


def estimate_moments(
    config: MCConfig,
    order: int,
    points: Sequence[float],
    settings: Optional[Dict[str, Any]] = None,
    workers: Optional[int] = None,
) -> MCEstimate:
    pipeline = SimulationPipeline(config, settings, workers)
    return asyncio.run(pipeline.moments(order, points))


def ensemble_profile(
    config: MCConfig,
    bin_edges: np.ndarray,
    settings: Optional[Dict[str, Any]] = None,
    workers: Optional[int] = None,
) -> Tuple[LocalTimeProfile, np.ndarray]:
    pipeline = SimulationPipeline(config, settings, workers)
    return asyncio.run(pipeline.profile(bin_edges))


def sample_terminal_positions(
    config: MCConfig, settings: Optional[Dict[str, Any]] = None, workers: Optional[int] = None
) -> np.ndarray:
    pipeline = SimulationPipeline(config, settings, workers)
    return asyncio.run(pipeline.terminal_positions())
