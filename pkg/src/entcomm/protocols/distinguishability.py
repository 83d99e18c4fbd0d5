from dataclasses import replace
from typing import Sequence

import numpy as np

from ..config import logger, tolerances
from ..discrimination import Ensemble, discriminate, discriminate_many
from ..errors import DimensionMismatchError
from ..qcore import DensityState
from .correlations import eaqc_output_states, steered_assemblage
from .models import EaccProtocol, EaqcProtocol, QcProtocol


def _priors(priors, n: int) -> np.ndarray:
    priors = np.full(n, 1.0 / n) if priors is None else np.asarray(priors, dtype=float)
    if priors.shape != (n,):
        raise DimensionMismatchError(f"{priors.shape[0]} priors for {n} inputs")
    if abs(priors.sum() - 1.0) > tolerances["weights"] or np.any(priors < 0):
        raise ValueError("Priors must be a probability vector")
    return priors


def _ensemble_from_operators(operators, dim: int) -> Ensemble:
    """Ensemble whose weighted matrices are the given PSD operators."""
    states, weights = [], []
    for op in operators:
        w = float(np.real(np.trace(op)))
        if w <= tolerances["trace"]:
            states.append(DensityState.maximally_mixed(dim))
            weights.append(0.0)
        else:
            states.append(DensityState(op / w, check=False))
            weights.append(w)
    return Ensemble(tuple(states), np.asarray(weights))


def qc_distinguishability(p: QcProtocol, priors=None, tol=None) -> float:
    priors = _priors(priors, len(p.states))
    return discriminate(Ensemble(p.states, priors), tol=tol, strict=False).value


def message_ensembles(p: EaccProtocol, priors=None):
    """
    One sub-normalised ensemble per message

    Block m holds p_x sum_{a: f(a,x) = m} p(a|x) rho^B_{a|x}; Bob's state is the
    direct sum of the blocks, so its discrimination value is the sum of theirs.
    """
    n_x = len(p.alice_povms)
    priors = _priors(priors, n_x)
    d_b = p.dims[1]
    blocks = [[np.zeros((d_b, d_b), complex) for _ in range(n_x)] for _ in range(p.n_messages)]
    for x, branch in enumerate(steered_assemblage(p)):
        for a, rho_tilde in enumerate(branch):
            blocks[p.message(a, x)][x] += priors[x] * rho_tilde
    return [_ensemble_from_operators(block, d_b) for block in blocks]


def eacc_distinguishability(p: EaccProtocol, priors=None, tol=None) -> float:
    """
    Distinguishability of Alice's inputs from Bob's half and the message

    Messages that never occur contribute 0 and are skipped.
    """
    ensembles = [e for e in message_ensembles(p, priors) if np.any(e.weights > 0)]
    results = discriminate_many(ensembles, tol=tol, strict=False)
    return float(sum(r.value for r in results))


def eacc_distinguishability_interval(p: EaccProtocol, priors=None, tol=None):
    """Certified (lower, upper) bounds on eacc_distinguishability."""
    ensembles = [e for e in message_ensembles(p, priors) if np.any(e.weights > 0)]
    results = discriminate_many(ensembles, tol=tol, strict=False)
    return sum(r.value for r in results), sum(r.upper_bound for r in results)


def eaqc_distinguishability(p: EaqcProtocol, priors=None, tol=None) -> float:
    priors = _priors(priors, len(p.channels))
    states = eaqc_output_states(p)
    return discriminate(Ensemble(tuple(states), priors), tol=tol, strict=False).value


def _best_over(candidates: Sequence, evaluate):
    if not candidates:
        raise ValueError("At least one candidate shared state is required")
    values = [evaluate(s) for s in candidates]
    best = int(np.argmax(values))
    logger.debug(f"Candidate values {np.round(values, 6).tolist()}, best index {best}")
    return values[best], best


def scenario1_eacc_distinguishability(p: EaccProtocol, candidates, priors=None):
    """
    Distinguishability when Alice does not know the shared state

    Evaluated as the maximum over the caller-supplied candidate states, with
    Alice's and Bob's devices held fixed. Returns (value, index of the maximiser).
    """
    return _best_over(
        candidates, lambda s: eacc_distinguishability(replace(p, shared=s), priors)
    )


def scenario1_eaqc_distinguishability(p: EaqcProtocol, candidates, priors=None):
    return _best_over(
        candidates, lambda s: eaqc_distinguishability(replace(p, shared=s), priors)
    )
