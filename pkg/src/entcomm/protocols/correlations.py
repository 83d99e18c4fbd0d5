from typing import NamedTuple

import numpy as np

from ..config import logger, tolerances
from ..errors import DimensionMismatchError
from ..qcore import DensityState
from ..qcore.linalg import hermitian_sqrt, partial_trace
from .models import CorrelationTable, EaccProtocol, EaqcProtocol, QcProtocol


class PostState(NamedTuple):
    state: DensityState
    probability: float
    # True when the branch never occurs and ``state`` is a stand-in
    placeholder: bool = False


def steered_operator(sigma: DensityState, m_ax, dims) -> np.ndarray:
    """Unnormalised Bob operator Tr_A[(M ⊗ 1) sigma], computed as Tr_A[(√M ⊗ 1) sigma (√M ⊗ 1)]."""
    d_a, d_b = dims
    m_ax = np.asarray(m_ax, dtype=np.complex128)
    if m_ax.shape != (d_a, d_a):
        raise DimensionMismatchError(f"Effect of shape {m_ax.shape} does not act on dA={d_a}")
    root = np.kron(hermitian_sqrt(m_ax), np.eye(d_b))
    out = partial_trace(root @ sigma.matrix @ root, (d_a, d_b), keep="B")
    return (out + out.conj().T) / 2


def _split_dims(sigma: DensityState, m_ax, dims):
    if dims is not None:
        return tuple(dims)
    d_a = np.asarray(m_ax).shape[0]
    if sigma.dim % d_a:
        raise DimensionMismatchError(f"dA={d_a} does not divide the shared dim {sigma.dim}")
    return d_a, sigma.dim // d_a


def reduced_post_state(sigma: DensityState, m_ax, dims=None) -> PostState:
    """
    Bob's conditional state after Alice obtains the effect m_ax

    Returns:
        PostState(rho^B_{a|x}, p(a|x, sigma), placeholder); a branch with zero
        probability carries the maximally mixed state and ``placeholder=True``
    """
    dims = _split_dims(sigma, m_ax, dims)
    unnormalised = steered_operator(sigma, m_ax, dims)
    probability = float(np.real(np.trace(unnormalised)))
    if probability <= tolerances["trace"]:
        logger.debug("Zero-probability branch, returning a placeholder state")
        return PostState(DensityState.maximally_mixed(dims[1]), 0.0, True)
    rho = unnormalised / probability
    return PostState(DensityState(rho, check=False), probability, False)


def _born(state_matrix, povm) -> np.ndarray:
    probs = np.array([np.real(np.trace(state_matrix @ e)) for e in povm.elements])
    return np.clip(probs, 0.0, None)


def qc_correlations(p: QcProtocol) -> CorrelationTable:
    n_x, n_y, n_z = p.shape
    raw = np.zeros((n_x, n_y, n_z))
    for x, rho in enumerate(p.states):
        for y, povm in enumerate(p.measurements):
            raw[x, y] = _born(rho.matrix, povm)
    return CorrelationTable(raw)


def steered_assemblage(p: EaccProtocol):
    """steered[x][a] = p(a|x) rho^B_{a|x} as an unnormalised matrix."""
    return [
        [steered_operator(p.shared, e, p.dims) for e in povm.elements]
        for povm in p.alice_povms
    ]


def eacc_correlations(p: EaccProtocol) -> CorrelationTable:
    """p(z|x,y) = sum_a Tr[(M_{a|x} ⊗ N_{z|y,f(a,x)}) sigma]."""
    n_x, n_y, n_z = p.shape
    raw = np.zeros((n_x, n_y, n_z))
    for x, branch in enumerate(steered_assemblage(p)):
        for a, rho_tilde in enumerate(branch):
            m = p.message(a, x)
            for y in range(n_y):
                raw[x, y] += _born(rho_tilde, p.bob_povms[y][m])
    return CorrelationTable(raw)


def eaqc_output_states(p: EaqcProtocol):
    """rho_x = sum_k (K_k ⊗ 1) sigma (K_k ⊗ 1)^dagger on (d' x dB)."""
    eye = np.eye(p.dims[1])
    out = []
    for channel in p.channels:
        rho = np.zeros((channel.out_dim * p.dims[1],) * 2, dtype=np.complex128)
        for k in channel.kraus_ops:
            lifted = np.kron(k, eye)
            rho += lifted @ p.shared.matrix @ lifted.conj().T
        out.append(DensityState((rho + rho.conj().T) / 2, check=False))
    return out


def eaqc_correlations(p: EaqcProtocol) -> CorrelationTable:
    n_x, n_y, n_z = p.shape
    raw = np.zeros((n_x, n_y, n_z))
    for x, rho in enumerate(eaqc_output_states(p)):
        for y, povm in enumerate(p.bob_povms):
            raw[x, y] = _born(rho.matrix, povm)
    return CorrelationTable(raw)


def success_metric(task, table) -> float:
    """S = sum_{x,y,z} c(x,y,z) p(z|x,y)."""
    probs = table.probs if isinstance(table, CorrelationTable) else np.asarray(table)
    coefficients = np.asarray(task.coefficients, dtype=float)
    if coefficients.shape != probs.shape:
        raise DimensionMismatchError(
            f"Task coefficients {coefficients.shape} do not match table {probs.shape}"
        )
    return float(np.sum(coefficients * probs))
