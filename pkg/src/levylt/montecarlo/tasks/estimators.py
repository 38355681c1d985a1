import logging
import math
from typing import Callable, Tuple

import numpy as np
from scipy.special import ndtr

from levylt.core.schemas import ConfigurationError, MCEstimate
from levylt.core.utils import finite_integral

logger = logging.getLogger(__name__)


def lattice_aligned_edges(step: float, n_bins: int, stride: int = 1) -> np.ndarray:
    """
    Histogram edges for L̂, which only takes the values k·step (step = Δt/h).
    Edges sit at half-steps, (0.5 + j·stride)·step, so every bin holds exactly
    `stride` lattice values and L̂ = 0 stays outside as the atom.
    """
    if step <= 0.0 or n_bins < 1 or stride < 1:
        raise ConfigurationError(
            f"need step > 0, n_bins ≥ 1, stride ≥ 1; got {step}, {n_bins}, {stride}",
            "lattice_aligned_edges",
        )
    return (0.5 + stride * np.arange(n_bins + 1)) * step


def histogram_with_errors(
    samples: np.ndarray, edges: np.ndarray, n_total: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Density estimate count/(n·width) over the bins with its binomial standard
    error; `n_total` counts every sample including those outside the edges.
    """
    counts, _ = np.histogram(samples, bins=edges)
    widths = np.diff(edges)
    p = counts / n_total
    density = p / widths
    std_error = np.sqrt(p * (1.0 - p) / n_total) / widths
    return density, std_error


def proportion(hits: int, n: int) -> MCEstimate:
    p = hits / n
    return MCEstimate(mean=p, std_error=float(np.sqrt(p * (1.0 - p) / n)), n_samples=n)


def jackknife(
    samples: np.ndarray,
    statistic: Callable[[np.ndarray], float] = np.mean,
    n_blocks: int = 20,
) -> MCEstimate:
    """
    Delete-one-block jackknife of `statistic` over the leading axis. Blocks
    are contiguous in path order, so the estimate is reproducible.
    """
    samples = np.asarray(samples)
    n = len(samples)
    if n < 2:
        raise ConfigurationError(f"jackknife needs at least 2 samples, got {n}", "jackknife")
    n_blocks = min(n_blocks, n)
    blocks = np.array_split(np.arange(n), n_blocks)
    full = float(statistic(samples))
    leave_out = np.array([
        statistic(np.delete(samples, block, axis=0)) for block in blocks
    ])
    variance = (n_blocks - 1) / n_blocks * np.sum((leave_out - leave_out.mean()) ** 2)
    return MCEstimate(mean=full, std_error=float(np.sqrt(variance)), n_samples=n)


def brownian_estimator_spread(L: float, dt: float, width: float, diffusion: float) -> float:
    """
    Approximate standard deviation of L̂ around the local time L of a Brownian
    path: left-endpoint sampling noise at the two bin edges plus the average
    of L(y) over the bin, whose spatial increments have variance 2L|δy|/D.
    """
    step = math.sqrt(2.0 * diffusion * dt)
    return math.sqrt(max(L, 0.0) * (step * dt / (3.0 * width ** 2) + width / (6.0 * diffusion)))


def smeared_bin_mass(
    density: Callable[[float], float],
    lo: float,
    hi: float,
    shift: float,
    spread: Callable[[float], float],
    upper: float,
) -> float:
    """
    Probability that L + shift + spread(L)·Z lands in [lo, hi) when L has the
    given density on [0, upper] and Z is standard normal.
    """
    def weight(L: float) -> float:
        s = spread(L)
        a, b = lo - shift - L, hi - shift - L
        if s == 0.0:
            return density(L) if a <= 0.0 < b else 0.0
        return density(L) * (ndtr(b / s) - ndtr(a / s))

    near = [p for p in (lo - shift, hi - shift) if 0.0 < p < upper]
    return finite_integral(weight, 0.0, upper, rtol=1e-8, points=near, label="smeared_bin_mass")
