from __future__ import annotations

import dataclasses

from .cascade import SpreadEstimate
from .graph import WicGraph


@dataclasses.dataclass
class SeedResult:
    """Ordered seed set produced by a selector.

    ``scores[i]`` is the selector's internal score for the i-th seed (estimated
    spread for greedy, V+w for weight reset, rank score for baselines).
    ``round_times[i]`` is the cumulative wall time in seconds after the i-th
    seed was fixed, including ``pretreatment_time``.
    """

    algorithm: str
    seeds: list[int]
    scores: list[float]
    round_times: list[float]
    pretreatment_time: float = 0.0
    sigma: SpreadEstimate | None = None

    def prefix(self, k: int) -> list[int]:
        return self.seeds[:k]

    def time_for(self, k: int) -> float:
        if k == 0:
            return self.pretreatment_time
        return self.round_times[k - 1]

    def labels(self, g: WicGraph) -> list[int]:
        return [int(g.labels[s]) for s in self.seeds]
