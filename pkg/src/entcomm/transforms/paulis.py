"""Generalised Pauli (shift and clock) unitaries and the matching Bell basis."""
import math

import numpy as np

from ..qcore import phi_plus


def shift(d: int) -> np.ndarray:
    """X|j> = |j+1 mod d>."""
    return np.roll(np.eye(d, dtype=np.complex128), 1, axis=0)


def clock(d: int) -> np.ndarray:
    """Z|j> = w^j |j> with w = exp(2 pi i / d)."""
    return np.diag(np.exp(2j * np.pi * np.arange(d) / d))


def pauli(m: int, d: int) -> np.ndarray:
    """U_m = X^j Z^l with m = j d + l, for m in [0, d^2)."""
    if not 0 <= m < d * d:
        raise ValueError(f"Pauli index {m} outside [0, {d * d})")
    j, l = divmod(m, d)
    return np.linalg.matrix_power(shift(d), j) @ np.linalg.matrix_power(clock(d), l)


def bell_vector(m: int, d: int) -> np.ndarray:
    """|Phi_m> = (U_m ⊗ 1)|phi+>."""
    return np.kron(pauli(m, d), np.eye(d)) @ phi_plus(d).amplitudes


def bell_projectors(d: int):
    return [np.outer(v, v.conj()) for v in (bell_vector(m, d) for m in range(d * d))]


def dense_coding_dim(n_messages: int) -> int:
    """Smallest d with d^2 >= n_messages."""
    if n_messages < 1:
        raise ValueError("Dense coding needs at least one message")
    return max(2, math.isqrt(n_messages - 1) + 1)
