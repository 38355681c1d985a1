"""
The atomic steps of a Monte Carlo run. Each is a plain synchronous function
over numpy arrays; the pipeline schedules them in worker threads.

1.  `sampling`: increments (Chambers–Mallows–Stuck), free paths, Brownian
    bridges and endpoint-conditioned batches.
2.  `profiles`: binned local-time profiles and the exact expectation of the
    discretized estimator.
3.  `estimators`: L̂ histograms, atom proportions, jackknife errors and the
    resolution model of the binned estimator.
"""

from levylt.montecarlo.tasks.estimators import (
    brownian_estimator_spread,
    histogram_with_errors,
    jackknife,
    lattice_aligned_edges,
    proportion,
    smeared_bin_mass,
)
from levylt.montecarlo.tasks.profiles import (
    expected_bin_occupation,
    local_time_at,
    local_time_profile,
    occupation_counts,
    zero_bin_fraction,
)
from levylt.montecarlo.tasks.sampling import (
    brownian_bridge_path,
    check_endpoint_support,
    default_epsilon,
    path_rng,
    sample_batch,
    sample_increment,
    simulate_path,
)

__all__ = [
    "brownian_estimator_spread",
    "histogram_with_errors",
    "jackknife",
    "lattice_aligned_edges",
    "proportion",
    "smeared_bin_mass",
    "expected_bin_occupation",
    "local_time_at",
    "local_time_profile",
    "occupation_counts",
    "zero_bin_fraction",
    "brownian_bridge_path",
    "check_endpoint_support",
    "default_epsilon",
    "path_rng",
    "sample_batch",
    "sample_increment",
    "simulate_path",
]
