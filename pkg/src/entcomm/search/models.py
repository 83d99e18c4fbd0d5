from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from ..config import seesaw_settings
from ..protocols import protocol_to_json


@dataclass(frozen=True)
class SeesawConfig:
    dims: Tuple[int, int] = (2, 2)
    restarts: int = seesaw_settings["restarts"]
    max_rounds: int = seesaw_settings["max_rounds"]
    rng_seed: int = seesaw_settings["seed"]
    convergence_eps: float = seesaw_settings["convergence_eps"]
    # Alice's outcome count; each outcome is sent as its own message
    n_messages: int = 2

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_rounds < 0:
            raise ValueError(f"max_rounds must be >= 0, got {self.max_rounds}")
        if self.convergence_eps <= 0:
            raise ValueError(f"convergence_eps must be positive, got {self.convergence_eps}")
        if self.n_messages < 1:
            raise ValueError(f"n_messages must be >= 1, got {self.n_messages}")
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != 2 or min(dims) < 1 or max(dims) > 4:
            raise ValueError(f"dims must be two sizes between 1 and 4, got {self.dims}")
        object.__setattr__(self, "dims", dims)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "restarts": self.restarts,
            "max_rounds": self.max_rounds,
            "rng_seed": self.rng_seed,
            "convergence_eps": self.convergence_eps,
            "n_messages": self.n_messages,
        }


@dataclass(frozen=True, eq=False)
class SearchResult:
    """
    Best protocol found by a see-saw run

    ``trace[i]`` holds the objective after every accepted half-step of
    restart i; ``restart`` is the index of the winning restart.
    """

    protocol: object
    success: float
    distinguishability: float
    ratio: Optional[float]
    trace: List[List[float]] = field(default_factory=list, repr=False)
    restart: int = 0
    config: Optional[SeesawConfig] = None
    d_budget: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "success": self.success,
            "distinguishability": self.distinguishability,
            "ratio": self.ratio,
            "restart": self.restart,
            "d_budget": self.d_budget,
            "config": None if self.config is None else self.config.to_dict(),
            "trace": [[float(v) for v in t] for t in self.trace],
            "protocol": protocol_to_json(self.protocol),
        }
