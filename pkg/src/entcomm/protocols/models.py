from dataclasses import dataclass
from typing import Tuple

import numpy as np
import pandas as pd

from ..config import tolerances
from ..errors import DimensionMismatchError, ValidationError
from ..qcore import DensityState, KrausChannel, Povm, PureState


def _density(state) -> DensityState:
    return state.density() if isinstance(state, PureState) else state


def _check_outcomes(povms, name: str) -> int:
    counts = {p.outcomes for p in povms}
    if len(counts) != 1:
        raise DimensionMismatchError(f"{name} POVMs disagree on the outcome count {sorted(counts)}")
    return counts.pop()


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    """p(z|x,y) indexed [x, y, z]."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 3:
            raise ValueError("A correlation table is indexed [x, y, z]")
        if np.min(probs) < -tolerances["table"]:
            raise ValidationError(f"Negative probability {np.min(probs):.2e} in table")
        deviation = np.max(np.abs(probs.sum(axis=2) - 1.0))
        if deviation > tolerances["table"]:
            raise ValidationError(f"Table rows deviate from normalisation by {deviation:.2e}")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def shape(self):
        return self.probs.shape

    def max_deviation(self, other: "CorrelationTable") -> float:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Tables of shape {self.shape} and {other.shape}")
        return float(np.max(np.abs(self.probs - other.probs)))

    def to_frame(self) -> pd.DataFrame:
        n_x, n_y, n_z = self.shape
        x, y, z = np.meshgrid(range(n_x), range(n_y), range(n_z), indexing="ij")
        return pd.DataFrame(
            {
                "x": x.reshape(-1) + 1,
                "y": y.reshape(-1) + 1,
                "z": z.reshape(-1) + 1,
                "p": self.probs.reshape(-1),
            }
        )


@dataclass(frozen=True, eq=False)
class QcProtocol:
    """Alice sends rho_x, Bob measures M_{z|y}."""

    states: Tuple[DensityState, ...]
    measurements: Tuple[Povm, ...]

    def __post_init__(self):
        states = tuple(_density(s) for s in self.states)
        measurements = tuple(self.measurements)
        if not states or not measurements:
            raise ValueError("A QC protocol needs states and measurements")
        dims = {s.dim for s in states} | {m.dim for m in measurements}
        if len(dims) != 1:
            raise DimensionMismatchError(f"QC protocol mixes dimensions {sorted(dims)}")
        _check_outcomes(measurements, "Bob")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "measurements", measurements)

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def shape(self):
        return len(self.states), len(self.measurements), self.measurements[0].outcomes


@dataclass(frozen=True, eq=False)
class EaccProtocol:
    """
    Entanglement-assisted classical communication

    Alice measures M_{a|x} on her half of ``shared`` and sends
    message_fn[x, a]; Bob measures bob_povms[y][message] on his half.
    """

    shared: DensityState
    dims: Tuple[int, int]
    alice_povms: Tuple[Povm, ...]
    message_fn: np.ndarray
    bob_povms: Tuple[Tuple[Povm, ...], ...]

    def __post_init__(self):
        shared = _density(self.shared)
        d_a, d_b = (int(d) for d in self.dims)
        if shared.dim != d_a * d_b:
            raise DimensionMismatchError(f"Shared state of dim {shared.dim} is not {d_a}x{d_b}")
        alice = tuple(self.alice_povms)
        bob = tuple(tuple(row) for row in self.bob_povms)
        if not alice or not bob:
            raise ValueError("An EACC protocol needs Alice and Bob measurements")
        for m in alice:
            if m.dim != d_a:
                raise DimensionMismatchError(f"Alice POVM of dim {m.dim}, expected {d_a}")
        n_messages = {len(row) for row in bob}
        if len(n_messages) != 1:
            raise DimensionMismatchError("Bob needs one POVM per message for every y")
        for row in bob:
            for m in row:
                if m.dim != d_b:
                    raise DimensionMismatchError(f"Bob POVM of dim {m.dim}, expected {d_b}")
        _check_outcomes([m for row in bob for m in row], "Bob")

        message_fn = np.array(self.message_fn, dtype=int)
        n_a = max(m.outcomes for m in alice)
        if message_fn.shape != (len(alice), n_a):
            raise ValueError(
                f"message_fn must be indexed [x, a] with shape {(len(alice), n_a)}, "
                f"got {message_fn.shape}"
            )
        if message_fn.min() < 0 or message_fn.max() >= n_messages.pop():
            raise ValueError("message_fn refers to a message Bob has no POVM for")
        message_fn.setflags(write=False)

        object.__setattr__(self, "shared", shared)
        object.__setattr__(self, "dims", (d_a, d_b))
        object.__setattr__(self, "alice_povms", alice)
        object.__setattr__(self, "bob_povms", bob)
        object.__setattr__(self, "message_fn", message_fn)

    @property
    def n_messages(self) -> int:
        return len(self.bob_povms[0])

    @property
    def shape(self):
        return len(self.alice_povms), len(self.bob_povms), self.bob_povms[0][0].outcomes

    def message(self, a: int, x: int) -> int:
        return int(self.message_fn[x, a])


@dataclass(frozen=True, eq=False)
class EaqcProtocol:
    """Alice applies channels[x] to her half, Bob measures on (d' x dB)."""

    shared: DensityState
    dims: Tuple[int, int]
    channels: Tuple[KrausChannel, ...]
    bob_povms: Tuple[Povm, ...]

    def __post_init__(self):
        shared = _density(self.shared)
        d_a, d_b = (int(d) for d in self.dims)
        if shared.dim != d_a * d_b:
            raise DimensionMismatchError(f"Shared state of dim {shared.dim} is not {d_a}x{d_b}")
        channels = tuple(self.channels)
        bob = tuple(self.bob_povms)
        if not channels or not bob:
            raise ValueError("An EAQC protocol needs channels and Bob measurements")
        if {c.in_dim for c in channels} != {d_a}:
            raise DimensionMismatchError(f"Channel input dims must all equal {d_a}")
        out_dims = {c.out_dim for c in channels}
        if len(out_dims) != 1:
            raise DimensionMismatchError(f"Channel output dims differ: {sorted(out_dims)}")
        d_out = out_dims.pop()
        for m in bob:
            if m.dim != d_out * d_b:
                raise DimensionMismatchError(
                    f"Bob POVM of dim {m.dim}, expected {d_out}x{d_b}"
                )
        _check_outcomes(bob, "Bob")
        object.__setattr__(self, "shared", shared)
        object.__setattr__(self, "dims", (d_a, d_b))
        object.__setattr__(self, "channels", channels)
        object.__setattr__(self, "bob_povms", bob)

    @property
    def out_dim(self) -> int:
        return self.channels[0].out_dim

    @property
    def shape(self):
        return len(self.channels), len(self.bob_povms), self.bob_povms[0].outcomes
