from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from ..config import tolerances
from ..errors import DimensionMismatchError
from ..qcore import DensityState, Povm, PureState


@dataclass(frozen=True, eq=False)
class Ensemble:
    """Weighted states; the weights may be sub-normalised."""

    states: Tuple[DensityState, ...]
    weights: np.ndarray

    def __post_init__(self):
        states = tuple(
            s.density() if isinstance(s, PureState) else s for s in self.states
        )
        if not states:
            raise ValueError("An ensemble needs at least one state")
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if weights.shape[0] != len(states):
            raise ValueError(
                f"{len(states)} states but {weights.shape[0]} weights were given"
            )
        if np.any(weights < 0):
            raise ValueError("Ensemble weights must be nonnegative")
        if weights.sum() > 1 + tolerances["weights"]:
            raise ValueError(f"Ensemble weights sum to {weights.sum()} > 1")
        dims = {s.dim for s in states}
        if len(dims) != 1:
            raise DimensionMismatchError(f"Ensemble mixes dimensions {sorted(dims)}")
        weights.setflags(write=False)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, states: Sequence) -> "Ensemble":
        return cls(tuple(states), np.full(len(states), 1.0 / len(states)))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def __len__(self):
        return len(self.states)

    def weighted_matrices(self):
        return [w * s.matrix for w, s in zip(self.weights, self.states)]

    def transformed(self, unitary) -> "Ensemble":
        u = np.asarray(unitary)
        return Ensemble(
            tuple(DensityState(u @ s.matrix @ u.conj().T) for s in self.states),
            self.weights,
        )

    def appended(self, state, weight: float = 0.0) -> "Ensemble":
        return Ensemble(self.states + (state,), np.append(self.weights, weight))


@dataclass(frozen=True, eq=False)
class DiscriminationResult:
    value: float
    povm: Povm
    dual_cert: np.ndarray
    gap: float

    @property
    def upper_bound(self) -> float:
        return float(np.real(np.trace(self.dual_cert)))

    @property
    def interval(self):
        return self.value, self.upper_bound
