import itertools

import numpy as np

from ..qcore.linalg import binary_measurement, bloch_state
from ..protocols import QcProtocol
from .base import Task, clip_bound, uniform


def rac_inputs(n: int, d: int):
    """Alice's strings x = x_1 ... x_n in lexicographic order."""
    return list(itertools.product(range(d), repeat=n))


def rac_bound(n: int, d: int, s: float) -> float:
    """Classical distinguishability needed for success s: n s + 1 - n <= D_C."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"Success {s} outside [0, 1]")
    return clip_bound(n * s + 1 - n, 1.0 / d**n)


def rac_task(n: int, d: int) -> Task:
    """(n, d) random access code: guess the y-th dit of x."""
    if n < 1 or d < 2:
        raise ValueError("A random access code needs n >= 1 and d >= 2")
    inputs = rac_inputs(n, d)
    c = np.zeros((len(inputs), n, d))
    weight = 1.0 / (n * d**n)
    for x, string in enumerate(inputs):
        for y in range(n):
            c[x, y, string[y]] = weight
    return Task(
        c,
        uniform(len(inputs)),
        "rac",
        {"n": n, "d": d},
        bound=lambda s: rac_bound(n, d, s),
    )


# Bob's measurement axis for each y, in Bloch coordinates
_RAC_AXES = {
    2: [(0, 0, 1), (1, 0, 0)],
    3: [(0, 0, 1), (1, 0, 0), (0, 1, 0)],
}


def rac_qc_protocol(n: int) -> QcProtocol:
    """
    Optimal qubit QC protocol for the (2,2) and (3,2) codes

    The state for x has Bloch vector sum_y (-1)^{x_y} axis_y / sqrt(n); Bob
    measures along axis_y and reads outcome 0 as x_y = 0.
    """
    if n not in _RAC_AXES:
        raise ValueError("Only the (2,2) and (3,2) codes have a stored protocol")
    axes = np.array(_RAC_AXES[n], dtype=float)
    states = []
    for string in rac_inputs(n, 2):
        r = sum((-1) ** bit * axis for bit, axis in zip(string, axes)) / np.sqrt(n)
        states.append(bloch_state(r).density())
    measurements = [binary_measurement(axis) for axis in axes]
    return QcProtocol(tuple(states), tuple(measurements))


def rac_eaqc_reference() -> dict:
    """
    Arithmetic of the (3,2) EAQC protocol with eight qubit unitaries

    Success 1/2 + 1/sqrt(6) needs D_C >= 3/sqrt(6) - 1/2 classically, while
    eight unitaries on a qubit pair are capped at 2^2/8.
    """
    s = 0.5 + 1.0 / np.sqrt(6)
    classical = 3 * s + 1 - 3
    cap = 2**2 / 8
    return {
        "success": s,
        "classical_bound": classical,
        "unitary_cap": cap,
        "ratio": classical / cap,
    }
