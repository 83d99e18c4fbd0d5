from dataclasses import asdict, dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class TransformReport:
    max_table_deviation: float
    distinguishability_before: Optional[float]
    distinguishability_after: Optional[float]
    dims_used: Tuple[int, ...]
    # teleportation only: worst |p(m|x) - 1/d'^2|
    message_uniformity_deviation: Optional[float] = None

    def __post_init__(self):
        if self.max_table_deviation < 0:
            raise ValueError("Table deviation must be nonnegative")

    @property
    def distinguishability_deviation(self) -> Optional[float]:
        if self.distinguishability_before is None or self.distinguishability_after is None:
            return None
        return abs(self.distinguishability_after - self.distinguishability_before)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["dims_used"] = list(self.dims_used)
        out["distinguishability_deviation"] = self.distinguishability_deviation
        return out
