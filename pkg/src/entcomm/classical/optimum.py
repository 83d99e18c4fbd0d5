import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from ..config import classical_settings, logger, threads
from ..errors import InfeasibleCapError
from .strategies import Decoding, Encoding, encoding_distinguishability, simulate


@dataclass(frozen=True, eq=False)
class ClassicalOptimum:
    value: float
    encoding: Encoding
    decoding: Decoding
    # False when the multistart heuristic produced the value (lower bound only)
    certified: bool
    distinguishability: float
    decoder_classes: int


def _patterns(n_y: int, n_z: int):
    return list(itertools.product(range(n_z), repeat=n_y))


def _pattern_scores(coefficients: np.ndarray, patterns) -> np.ndarray:
    """scores[g, x] = sum_y c(x, y, g[y])."""
    n_y = coefficients.shape[1]
    idx = np.asarray(patterns, dtype=int)
    ys = np.arange(n_y)
    return np.stack([coefficients[:, ys, row].sum(axis=1) for row in idx])


class _CappedEncodingLP:
    """
    LP over the lifted capped-encoding polytope for k messages

    Variables are p_e(m|x) (row-major) followed by t_m with
    p_x p_e(m|x) <= t_m and sum_m t_m <= d_cap.
    """

    def __init__(self, priors: np.ndarray, k: int, d_cap: float):
        n = priors.shape[0]
        self.n, self.k = n, k
        n_p = n * k
        a_eq = np.zeros((n, n_p + k))
        for x in range(n):
            a_eq[x, x * k : (x + 1) * k] = 1.0
        a_ub = np.zeros((n_p + 1, n_p + k))
        for x in range(n):
            for m in range(k):
                a_ub[x * k + m, x * k + m] = priors[x]
                a_ub[x * k + m, n_p + m] = -1.0
        a_ub[n_p, n_p:] = 1.0
        b_ub = np.zeros(n_p + 1)
        b_ub[n_p] = d_cap
        self.a_eq, self.b_eq = a_eq, np.ones(n)
        self.a_ub, self.b_ub = a_ub, b_ub
        self.bounds = [(0.0, 1.0)] * n_p + [(0.0, None)] * k

    def solve(self, scores: np.ndarray):
        """``scores[x, m]`` is the payoff of sending m on input x."""
        c = np.concatenate([-scores.reshape(-1), np.zeros(self.k)])
        res = linprog(
            c,
            A_ub=self.a_ub,
            b_ub=self.b_ub,
            A_eq=self.a_eq,
            b_eq=self.b_eq,
            bounds=self.bounds,
            method="highs",
        )
        if res.status != 0:
            return None, -np.inf
        return res.x[: self.n * self.k].reshape(self.n, self.k), -res.fun


def _clean_rows(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, 1.0)
    return p / p.sum(axis=1, keepdims=True)


def _pad(p: np.ndarray, patterns, n_messages: int):
    k = p.shape[1]
    enc = np.zeros((p.shape[0], n_messages))
    enc[:, :k] = p
    pats = list(patterns) + [patterns[0]] * (n_messages - k)
    return enc, pats


def _class_count(n_patterns: int, n_messages: int) -> int:
    return sum(math.comb(n_patterns, k) for k in range(1, min(n_messages, n_patterns) + 1))


def classical_optimum(task, d_cap: float, n_messages: int = None, seed: int = 0):
    """
    Maximum success of a classical strategy with distinguishability at most d_cap

    Two messages decoded identically can be merged without raising the
    distinguishability, so it is enough to range over sets of distinct
    deterministic decoder columns and solve one LP per set. The LP optimum sits
    on a vertex of the capped-encoding polytope, so the best LP value is the
    vertex maximum. Scenarios with too many sets fall back to a multistart
    alternation between the LP and the best-response decoder; that value is a
    lower bound and ``certified`` is False.

    Args:
        task: anything carrying ``coefficients[x, y, z]`` and ``priors[x]``
        d_cap: distinguishability cap
        n_messages: message alphabet size, defaults to the number of inputs
        seed: seed for the heuristic path

    Returns:
        ClassicalOptimum
    """
    coefficients = np.asarray(task.coefficients, dtype=float)
    priors = np.asarray(task.priors, dtype=float)
    n_x, n_y, n_z = coefficients.shape
    n_messages = n_x if n_messages is None else int(n_messages)
    if n_messages < 1:
        raise ValueError("classical_optimum needs at least one message")
    if d_cap < priors.max() - classical_settings["dedup_tol"]:
        raise InfeasibleCapError(
            f"d_cap={d_cap} is below the guessing floor max_x p_x={priors.max()}"
        )

    patterns = _patterns(n_y, n_z)
    scores = _pattern_scores(coefficients, patterns)
    n_classes = _class_count(len(patterns), n_messages)

    if n_classes <= classical_settings["max_decoder_classes"]:
        logger.debug(f"Solving {n_classes} decoder classes exactly")
        value, p, chosen = _exact(priors, scores, n_messages, d_cap)
        certified = True
    else:
        logger.warning(
            f"{n_classes} decoder classes exceed the exact limit; "
            f"returning a heuristic lower bound"
        )
        value, p, chosen = _heuristic(
            priors, coefficients, scores, patterns, n_messages, d_cap, seed
        )
        certified = False

    enc, pats = _pad(_clean_rows(p), [patterns[g] for g in chosen], n_messages)
    encoding = Encoding(enc)
    decoding = Decoding.deterministic(pats, n_z)
    achieved = float(np.sum(coefficients * simulate(encoding, decoding)))
    if abs(achieved - value) > 1e-7:
        logger.warning(f"LP value {value:.9f} and simulated value {achieved:.9f} differ")
    return ClassicalOptimum(
        value=achieved,
        encoding=encoding,
        decoding=decoding,
        certified=certified,
        distinguishability=encoding_distinguishability(encoding, priors),
        decoder_classes=n_classes,
    )


def _exact(priors, scores, n_messages, d_cap):
    n_patterns = scores.shape[0]
    lps = {}
    subsets = [
        s
        for k in range(1, min(n_messages, n_patterns) + 1)
        for s in itertools.combinations(range(n_patterns), k)
    ]
    for k in {len(s) for s in subsets}:
        lps[k] = _CappedEncodingLP(priors, k, d_cap)

    def solve(subset):
        return lps[len(subset)].solve(scores[list(subset)].T)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(solve, subsets))
    else:
        results = [solve(s) for s in subsets]

    best = (-np.inf, None, None)
    # strict improvement keeps the first optimum in enumeration order
    for subset, (p, value) in zip(subsets, results):
        if p is not None and value > best[0] + 1e-12:
            best = (value, p, subset)
    return best


def _best_response(p, coefficients, patterns):
    """Per message and y, announce the z with the largest conditional payoff."""
    payoff = np.einsum("xm,xyz->myz", p, coefficients)
    choice = payoff.argmax(axis=2)
    index = {g: i for i, g in enumerate(patterns)}
    return [index[tuple(int(z) for z in row)] for row in choice]


def _heuristic(priors, coefficients, scores, patterns, n_messages, d_cap, seed):
    lp = _CappedEncodingLP(priors, n_messages, d_cap)
    best = (-np.inf, None, None)
    for start in range(classical_settings["heuristic_starts"]):
        rng = np.random.default_rng([seed, start])
        chosen = list(rng.integers(0, len(patterns), size=n_messages))
        value = -np.inf
        for _ in range(classical_settings["heuristic_rounds"]):
            p, new_value = lp.solve(scores[chosen].T)
            if p is None or new_value <= value + 1e-12:
                break
            value = new_value
            current = (value, p, tuple(chosen))
            chosen = _best_response(p, coefficients, patterns)
        if value > best[0] + 1e-12:
            best = current
        logger.debug(f"Heuristic start {start}: {value:.6f}")
    return best
