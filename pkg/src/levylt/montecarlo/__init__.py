"""
Monte Carlo side of the library: Lévy paths sampled with per-path random
streams, binned local-time estimators, and the SimulationPipeline that runs
them in parallel batches as an independent check of the analytic results.
"""

from levylt.montecarlo.pipeline import (
    SimulationPipeline,
    ensemble_profile,
    estimate_moments,
    estimate_onepoint_distribution,
    sample_terminal_positions,
)

__all__ = [
    "SimulationPipeline",
    "ensemble_profile",
    "estimate_moments",
    "estimate_onepoint_distribution",
    "sample_terminal_positions",
]
