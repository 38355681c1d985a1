"""
Binned local-time estimators. A path sampled at τ_0 … τ_N contributes its N
left endpoints x(τ_0) … x(τ_{N−1}), each carrying a time Δt = t/N, so that

    L̂(x_i) = Δt · #{k < N : x(τ_k) ∈ bin i} / h_i

and Σ_i L̂(x_i) h_i plus the time spent outside the grid equals t exactly.
"""
import logging
import math

import numpy as np

from levylt.analytic.stable import stable_cdf
from levylt.core.schemas import ConfigurationError, LocalTimeProfile, PathSample, WalkModel

logger = logging.getLogger(__name__)


def _check_edges(bin_edges: np.ndarray, operation: str) -> np.ndarray:
    edges = np.asarray(bin_edges, dtype=float)
    if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0.0):
        raise ConfigurationError("bin edges must be a strictly increasing 1-D array", operation)
    return edges


def occupation_counts(positions: np.ndarray, bin_edges: np.ndarray):
    """
    Left-endpoint counts per bin for each row of `positions` (paths × (N+1)),
    plus the counts left of the first edge and right of the last edge.
    """
    left = np.atleast_2d(positions)[:, :-1]
    n_bins = len(bin_edges) - 1
    index = np.searchsorted(bin_edges, left, side="right") - 1
    underflow = np.count_nonzero(index < 0, axis=1)
    overflow = np.count_nonzero(index >= n_bins, axis=1)
    inside = np.clip(index, 0, n_bins - 1)
    weights = ((index >= 0) & (index < n_bins)).astype(float)
    counts = np.zeros((left.shape[0], n_bins))
    rows = np.repeat(np.arange(left.shape[0]), left.shape[1])
    np.add.at(counts, (rows, inside.ravel()), weights.ravel())
    return counts, underflow, overflow


def local_time_profile(path: PathSample, bin_edges) -> LocalTimeProfile:
    """Binned local-time profile of one path."""
    edges = _check_edges(bin_edges, "local_time_profile")
    counts, underflow, overflow = occupation_counts(path.positions, edges)
    dt = path.dt
    return LocalTimeProfile(
        bin_edges=edges,
        values=dt * counts[0] / np.diff(edges),
        total_time=float(path.times[-1] - path.times[0]),
        underflow=dt * float(underflow[0]),
        overflow=dt * float(overflow[0]),
    )


def local_time_at(positions: np.ndarray, x: float, width: float, dt: float) -> np.ndarray:
    """L̂(x) for each path: occupation of the bin [x − h/2, x + h/2) divided by h."""
    left = np.atleast_2d(positions)[:, :-1]
    hits = np.count_nonzero((left >= x - 0.5 * width) & (left < x + 0.5 * width), axis=1)
    return dt * hits / width


def expected_bin_occupation(
    x_lo: float,
    x_hi: float,
    t: float,
    n_steps: int,
    x_a: float,
    model: WalkModel,
) -> float:
    """
    Exact expectation of the discretized estimator L̂ on [x_lo, x_hi) for free
    paths: (Δt/h) Σ_{k<N} Prob(x(τ_k) ∈ [x_lo, x_hi)). The k = 0 term is the
    indicator of x_a; the difference to the continuum mean is the
    discretization bias of the estimator.
    """
    if not x_hi > x_lo:
        raise ConfigurationError("x_hi must exceed x_lo", "expected_bin_occupation")
    dt = t / n_steps
    width = x_hi - x_lo
    total = 1.0 if x_lo <= x_a < x_hi else 0.0
    for k in range(1, n_steps):
        tau = k * dt
        total += stable_cdf(x_hi - x_a, tau, model) - stable_cdf(x_lo - x_a, tau, model)
    return dt * total / width


def zero_bin_fraction(profile: LocalTimeProfile) -> float:
    """
    Fraction of empty bins between the first and last occupied bin; grows as
    the path breaks up into isolated visits.
    """
    occupied = np.flatnonzero(profile.values > 0.0)
    if len(occupied) == 0:
        return math.nan
    window = profile.values[occupied[0]:occupied[-1] + 1]
    return float(np.count_nonzero(window == 0.0)) / len(window)
