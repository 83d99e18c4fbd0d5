import numpy as np

from .base import Task, clip_bound, uniform

# (z, x, y) cells, 1-indexed, of p(1|1,1)+p(1|1,2)+p(1|2,1)+p(2|2,2)+p(2|3,1)
CELLS = ((1, 1, 1), (1, 1, 2), (1, 2, 1), (2, 2, 2), (2, 3, 1))

# qubit QC value and the matching cap D_EACC = d/N = 2/3
TARGET_SUCCESS = 3 + np.sqrt(2)
TARGET_RATIO = (1 + np.sqrt(2)) / 2


def chaturvedi_bound(s: float) -> float:
    """S <= 2 + 3 D_C."""
    return clip_bound((s - 2) / 3, 1.0 / 3)


def chaturvedi_task() -> Task:
    c = np.zeros((3, 2, 2))
    for z, x, y in CELLS:
        c[x - 1, y - 1, z - 1] = 1.0
    return Task(c, uniform(3), "chaturvedi", {}, bound=chaturvedi_bound)
