from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..config import tolerances


@dataclass(frozen=True, eq=False)
class Task:
    """
    Communication task S = sum_{x,y,z} c(x,y,z) p(z|x,y)

    ``bound`` maps a success value to the smallest classical distinguishability
    able to reach it, for the families where that relation is known.
    """

    coefficients: np.ndarray
    priors: np.ndarray
    family: str
    params: dict = field(default_factory=dict)
    bound: Optional[Callable[[float], float]] = field(default=None, repr=False)

    def __post_init__(self):
        coefficients = np.array(self.coefficients, dtype=float)
        if coefficients.ndim != 3:
            raise ValueError("Task coefficients are indexed [x, y, z]")
        if not np.all(np.isfinite(coefficients)):
            raise ValueError("Task coefficients must be finite")
        priors = np.array(self.priors, dtype=float).reshape(-1)
        if priors.shape[0] != coefficients.shape[0]:
            raise ValueError(f"{priors.shape[0]} priors for {coefficients.shape[0]} inputs")
        if np.any(priors < 0) or abs(priors.sum() - 1.0) > tolerances["weights"]:
            raise ValueError("Task priors must form a probability vector")
        coefficients.setflags(write=False)
        priors.setflags(write=False)
        object.__setattr__(self, "coefficients", coefficients)
        object.__setattr__(self, "priors", priors)

    @property
    def n_x(self) -> int:
        return self.coefficients.shape[0]

    @property
    def n_y(self) -> int:
        return self.coefficients.shape[1]

    @property
    def n_z(self) -> int:
        return self.coefficients.shape[2]

    @property
    def guessing_floor(self) -> float:
        return float(self.priors.max())

    def classical_bound(self, s: float) -> Optional[float]:
        """Lower bound on D_C for success s, or None when the family has none."""
        return None if self.bound is None else self.bound(s)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "n_x": self.n_x,
            "n_y": self.n_y,
            "n_z": self.n_z,
            "priors": self.priors.tolist(),
            "coefficients": self.coefficients.reshape(-1).tolist(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Task":
        shape = (data["n_x"], data["n_y"], data["n_z"])
        return cls(
            np.asarray(data["coefficients"], dtype=float).reshape(shape),
            data["priors"],
            data.get("family", "custom"),
            data.get("params", {}),
        )


def clip_bound(value: float, floor: float) -> float:
    """Keep a distinguishability bound inside [floor, 1]."""
    return float(min(1.0, max(floor, value)))


def uniform(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)
