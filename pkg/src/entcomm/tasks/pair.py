import itertools

import numpy as np

from .base import Task, clip_bound, uniform


def pairs(n: int):
    return list(itertools.combinations(range(n), 2))


def pair_bound(n: int, s: float) -> float:
    """(N - 1)(S - 1) + 1 <= D_C."""
    return clip_bound((n - 1) * (s - 1) + 1, 1.0 / n)


def pair_task(n: int) -> Task:
    """Bob receives a pair (x, x') with x < x' and guesses which of the two Alice holds."""
    if n < 3:
        raise ValueError("The pair task needs N >= 3")
    ps = pairs(n)
    c = np.zeros((n, len(ps), n))
    weight = 1.0 / (n * (n - 1))
    for y, (a, b) in enumerate(ps):
        c[a, y, a] = weight
        c[b, y, b] = weight
    return Task(c, uniform(n), "pair", {"N": n}, bound=lambda s: pair_bound(n, s))
