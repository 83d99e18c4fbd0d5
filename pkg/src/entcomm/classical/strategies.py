from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..config import tolerances


def _check_stochastic(probs: np.ndarray, axis: int, name: str):
    if np.any(probs < -tolerances["stochastic"]) or np.any(
        probs > 1 + tolerances["stochastic"]
    ):
        raise ValueError(f"{name} entries must lie in [0, 1]")
    sums = probs.sum(axis=axis)
    if np.max(np.abs(sums - 1.0)) > tolerances["stochastic"]:
        raise ValueError(f"{name} is not normalised (max deviation {np.max(np.abs(sums - 1)):.2e})")


@dataclass(frozen=True, eq=False)
class Encoding:
    """p_e(m|x) as an (n_inputs, n_messages) row-stochastic matrix."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 2:
            raise ValueError("Encoding must be a 2-d array p_e[x, m]")
        _check_stochastic(probs, 1, "Encoding")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_inputs(self) -> int:
        return self.probs.shape[0]

    @property
    def n_messages(self) -> int:
        return self.probs.shape[1]

    @classmethod
    def deterministic(cls, assignment, n_messages: int) -> "Encoding":
        probs = np.zeros((len(assignment), n_messages))
        probs[np.arange(len(assignment)), list(assignment)] = 1.0
        return cls(probs)

    def relabeled(self, order) -> "Encoding":
        return Encoding(self.probs[:, list(order)])


@dataclass(frozen=True, eq=False)
class Decoding:
    """p_d(z|y,m) stored as an array indexed [m, y, z]."""

    probs: np.ndarray

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 3:
            raise ValueError("Decoding must be a 3-d array p_d[m, y, z]")
        _check_stochastic(probs, 2, "Decoding")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n_messages(self) -> int:
        return self.probs.shape[0]

    @property
    def n_inputs_y(self) -> int:
        return self.probs.shape[1]

    @property
    def n_outputs(self) -> int:
        return self.probs.shape[2]

    @classmethod
    def deterministic(cls, patterns, n_outputs: int) -> "Decoding":
        """``patterns[m][y]`` is the output announced for message m and input y."""
        patterns = np.asarray(patterns, dtype=int)
        probs = np.zeros(patterns.shape + (n_outputs,))
        for m, row in enumerate(patterns):
            probs[m, np.arange(len(row)), row] = 1.0
        return cls(probs)


def _distinguishability(probs, priors):
    weighted = np.asarray(priors).reshape(-1, 1) * probs
    return weighted.max(axis=0).sum()


def encoding_distinguishability(e: Encoding, priors) -> float:
    """sum_m max_x p_x p_e(m|x)."""
    priors = np.asarray(priors, dtype=float)
    if priors.shape[0] != e.n_inputs:
        raise ValueError(f"{priors.shape[0]} priors for {e.n_inputs} inputs")
    return float(_distinguishability(e.probs, priors))


def simulate(e: Encoding, d: Decoding) -> np.ndarray:
    """p(z|x,y) = sum_m p_e(m|x) p_d(z|y,m), indexed [x, y, z]."""
    if e.n_messages != d.n_messages:
        raise ValueError("Encoding and decoding disagree on the message count")
    return np.einsum("xm,myz->xyz", e.probs, d.probs)


def shift_encoding_demo(N: int):
    """
    Shared randomness trivialises the unconstrained encoding

    With lambda uniform on [N] and p_e(m'|x, lambda) = delta(m', x + lambda mod N),
    the message alone is uniform (distinguishability max_x p_x) while the pair
    (m', lambda) reveals x (distinguishability 1).

    Returns:
        tuple: (marginal_D, joint_D) for uniform priors
    """
    if N < 2:
        raise ValueError("The shift construction needs N >= 2")
    priors = np.array([Fraction(1, N)] * N, dtype=object)
    joint = np.zeros((N, N * N), dtype=object)
    joint[:] = Fraction(0)
    for x in range(N):
        for lam in range(N):
            joint[x, ((x + lam) % N) * N + lam] = Fraction(1, N)
    marginal = np.zeros((N, N), dtype=object)
    marginal[:] = Fraction(0)
    for x in range(N):
        for col in range(N * N):
            marginal[x, col // N] += joint[x, col]
    return (
        float(_distinguishability(marginal, priors)),
        float(_distinguishability(joint, priors)),
    )
