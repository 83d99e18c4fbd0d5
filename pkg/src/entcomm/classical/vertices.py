"""
Vertices of the lifted classical polytope {(p(z|x), D)} for scenarios with a
single Bob input

The encoding polytope is lifted with auxiliary t_m >= p_e(m|x) so that
D = sum_m t_m / N is linear. Its vertices come from cddlib (H -> V), every
deterministic decoder maps them to candidate points, and cddlib's redundancy
removal keeps the extreme ones.
"""
import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import List, Tuple

import cdd
import numpy as np
import pandas as pd

from ..config import classical_settings, logger
from ..errors import ScenarioTooLargeError

# Vertex counts quoted for the two scenarios with three inputs
REFERENCE_VERTEX_COUNTS = {(3, 3): 10368, (3, 4): 32768}


@dataclass(frozen=True, eq=False)
class Vertex:
    probs: np.ndarray  # p(z|x) indexed [x, z]
    distinguishability: float
    encoding: np.ndarray  # generating p_e(m|x)
    decoder: Tuple[int, ...]  # z announced for each message

    def simulated_probs(self) -> np.ndarray:
        out = np.zeros_like(self.probs)
        for m, z in enumerate(self.decoder):
            out[:, z] += self.encoding[:, m]
        return out


@dataclass(frozen=True, eq=False)
class VertexSet:
    scenario: Tuple[int, int]
    vertices: List[Vertex]
    candidate_count: int
    # distinct (p(z|x), D) points left before the extreme-point filter
    deduplicated_count: int = 0

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    @property
    def reference_count(self):
        return REFERENCE_VERTEX_COUNTS.get(tuple(self.scenario))

    def reduced_points(self) -> np.ndarray:
        """Rows (p(z|x) for z < n_z, D), the coordinates of the full-dimensional polytope."""
        return np.array(
            [
                np.append(v.probs[:, :-1].reshape(-1), v.distinguishability)
                for v in self.vertices
            ]
        )

    def to_frame(self) -> pd.DataFrame:
        n_x, n_z = self.scenario
        columns = [f"p({z + 1}|{x + 1})" for x in range(n_x) for z in range(n_z)]
        frame = pd.DataFrame(
            [v.probs.reshape(-1) for v in self.vertices], columns=columns
        )
        frame["D"] = [v.distinguishability for v in self.vertices]
        return frame

    def to_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False)
        logger.info(f"Wrote {len(self)} vertices to {path}")


def _encoding_h_matrix(n_x: int, n_m: int) -> cdd.Matrix:
    """Rows [b, a] meaning b + a.v >= 0 over v = (p_e(m|x) row-major, t_m)."""
    n_p = n_x * n_m
    width = n_p + n_m
    rows = []
    for i in range(n_p):
        row = [0.0] * (width + 1)
        row[1 + i] = 1.0
        rows.append(row)
    for x in range(n_x):
        for m in range(n_m):
            row = [0.0] * (width + 1)
            row[1 + x * n_m + m] = -1.0
            row[1 + n_p + m] = 1.0
            rows.append(row)
    for m in range(n_m):
        row = [0.0] * (width + 1)
        row[0] = 1.0
        row[1 + n_p + m] = -1.0
        rows.append(row)
    mat = cdd.Matrix(rows, number_type=classical_settings["cdd_number_type"])
    mat.rep_type = cdd.RepType.INEQUALITY

    equalities = []
    for x in range(n_x):
        row = [0.0] * (width + 1)
        row[0] = -1.0
        for m in range(n_m):
            row[1 + x * n_m + m] = 1.0
        equalities.append(row)
    mat.extend(equalities, linear=True)
    return mat


def encoding_vertices(n_x: int, n_m: int) -> np.ndarray:
    """Vertices (p_e, t) of the lifted encoding polytope with t_m <= 1."""
    poly = cdd.Polyhedron(_encoding_h_matrix(n_x, n_m))
    gens = np.array(poly.get_generators(), dtype=float)
    if np.any(gens[:, 0] == 0):
        raise RuntimeError("The lifted encoding polytope should be bounded")
    return gens[:, 1:]


def _key(values: np.ndarray, tol: float):
    return tuple(np.round(values / tol).astype(np.int64))


def _extreme_rows(points: np.ndarray) -> np.ndarray:
    """Indices of the rows of ``points`` that are vertices of their convex hull."""
    mat = cdd.Matrix(
        np.hstack([np.ones((len(points), 1)), points]).tolist(),
        number_type=classical_settings["cdd_number_type"],
    )
    mat.rep_type = cdd.RepType.GENERATOR
    mat.canonicalize()
    tol = classical_settings["dedup_tol"]
    index = {_key(p, tol): i for i, p in enumerate(points)}
    kept = []
    for row in np.array(mat, dtype=float):
        i = index.get(_key(row[1:], tol))
        if i is None:
            # cddlib may perturb coordinates, fall back to the nearest candidate
            i = int(np.argmin(np.abs(points - row[1:]).sum(axis=1)))
        kept.append(i)
    return np.array(sorted(set(kept)), dtype=int)


def enumerate_vertices(scenario, n_messages: int = None) -> VertexSet:
    """
    Extreme points (p(z|x), D) of the capped classical polytope, uniform priors

    Args:
        scenario: (n_x, n_z) with a single Bob input
        n_messages: message alphabet size, defaults to n_x

    Returns:
        VertexSet, each vertex carrying the encoding and decoder that generate it
    """
    n_x, n_z = (int(v) for v in scenario)
    if n_x < 1 or n_z < 1:
        raise ValueError(f"Invalid scenario {scenario}")
    n_m = n_x if n_messages is None else int(n_messages)
    n_decoders = n_z**n_m
    if n_decoders > classical_settings["max_decoders"]:
        raise ScenarioTooLargeError(
            f"{n_decoders} candidate decoders exceed {classical_settings['max_decoders']}"
        )

    enc_vertices = encoding_vertices(n_x, n_m)
    logger.info(
        f"Scenario ({n_x},{n_z}): {len(enc_vertices)} encoding vertices, "
        f"{n_decoders} decoders"
    )
    n_p = n_x * n_m
    tol = classical_settings["dedup_tol"]

    # for each p(z|x) keep the generators of the smallest and largest D
    lowest, highest = {}, {}
    candidates = 0
    for v in enc_vertices:
        enc = v[:n_p].reshape(n_x, n_m)
        d = float(v[n_p:].sum() / n_x)
        for decoder in itertools.product(range(n_z), repeat=n_m):
            probs = np.zeros((n_x, n_z))
            for m, z in enumerate(decoder):
                probs[:, z] += enc[:, m]
            candidates += 1
            key = _key(probs[:, :-1].reshape(-1), tol)
            if key not in lowest or d < lowest[key][1] - tol:
                lowest[key] = (probs, d, enc, decoder)
            if key not in highest or d > highest[key][1] + tol:
                highest[key] = (probs, d, enc, decoder)

    pool = list(lowest.values()) + [
        item for key, item in highest.items() if item[1] > lowest[key][1] + tol
    ]
    points = np.array([np.append(p[:, :-1].reshape(-1), d) for p, d, _, _ in pool])
    logger.info(f"{candidates} candidate points, {len(pool)} after deduplication")

    keep = _extreme_rows(points)
    vertices = [
        Vertex(
            probs=np.clip(pool[i][0], 0.0, 1.0),
            distinguishability=pool[i][1],
            encoding=pool[i][2],
            decoder=tuple(int(z) for z in pool[i][3]),
        )
        for i in keep
    ]
    result = VertexSet((n_x, n_z), vertices, candidates, len(pool))
    if result.reference_count is not None and len(result) != result.reference_count:
        logger.warning(
            f"Scenario ({n_x},{n_z}): {len(result)} vertices, "
            f"reference count {result.reference_count}"
        )
    return result


def facets_from_vertices(vertex_set: VertexSet):
    """
    H-representation of a vertex set, returned as FacetInequality objects

    Only meant for small scenarios such as (2,2).
    """
    from .facets import FacetInequality

    n_x, n_z = vertex_set.scenario
    points = vertex_set.reduced_points()
    mat = cdd.Matrix(
        np.hstack([np.ones((len(points), 1)), points]).tolist(),
        number_type=classical_settings["cdd_number_type"],
    )
    mat.rep_type = cdd.RepType.GENERATOR
    h = cdd.Polyhedron(mat).get_inequalities()
    rows = np.array(h, dtype=float)
    if h.lin_set:
        rows = np.vstack([rows, -rows[sorted(h.lin_set)]])

    facets = []
    for row in rows:
        b, a = row[0], row[1:]
        a_p, a_d = a[:-1].reshape(n_x, n_z - 1), a[-1]
        coefficients = np.zeros((n_x, n_z))
        coefficients[:, :-1] = -a_p
        if not np.any(np.abs(coefficients) > 1e-12):
            # bounds on D alone are not expressible as a facet on p(z|x)
            continue
        facets.append(FacetInequality(coefficients, rhs_slope=a_d, rhs_constant=b))
    return facets
