"""
Aggregation helpers for the Monte Carlo pipeline.
"""

from levylt.montecarlo.utils.accumulators import RunningMoments

__all__ = [
    "RunningMoments",
]
