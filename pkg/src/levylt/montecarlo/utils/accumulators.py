from dataclasses import dataclass, field
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


@dataclass
class RunningMoments:
    """
    Count, mean and sum of squared deviations of a stream of (vector) samples.
    Two accumulators merge with Chan's pairwise update, so batch results can
    be combined in any grouping and give the same mean and variance.
    """
    count: int = 0
    mean: ArrayLike = 0.0
    m2: ArrayLike = field(default=0.0)

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "RunningMoments":
        samples = np.asarray(samples, dtype=float)
        if len(samples) == 0:
            return cls()
        mean = samples.mean(axis=0)
        return cls(count=len(samples), mean=mean, m2=((samples - mean) ** 2).sum(axis=0))

    def merge(self, other: "RunningMoments") -> "RunningMoments":
        if other.count == 0:
            return RunningMoments(self.count, self.mean, self.m2)
        if self.count == 0:
            return RunningMoments(other.count, other.mean, other.m2)
        count = self.count + other.count
        delta = np.asarray(other.mean) - np.asarray(self.mean)
        mean = self.mean + delta * other.count / count
        m2 = self.m2 + other.m2 + delta ** 2 * self.count * other.count / count
        return RunningMoments(count, mean, m2)

    @property
    def variance(self) -> ArrayLike:
        if self.count < 2:
            return np.zeros_like(np.asarray(self.mean, dtype=float))
        return self.m2 / (self.count - 1)

    @property
    def std_error(self) -> ArrayLike:
        return np.sqrt(self.variance / max(self.count, 1))
