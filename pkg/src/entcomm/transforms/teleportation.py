import numpy as np

from ..config import logger
from ..qcore import DensityState, Povm, phi_plus
from ..qcore.linalg import permute_systems
from ..protocols import (
    EaccProtocol,
    EaqcProtocol,
    eacc_correlations,
    eacc_distinguishability,
    eaqc_correlations,
    eaqc_distinguishability,
)
from ..protocols.correlations import steered_operator
from .paulis import bell_projectors, pauli
from .report import TransformReport


def _alice_povm(channel, projectors, d_out: int) -> Povm:
    """M_{m|x} = sum_i (E_i ⊗ 1)^dagger Pi_m (E_i ⊗ 1) on (A, A'')."""
    eye = np.eye(d_out)
    lifted = [np.kron(k, eye) for k in channel.kraus_ops]
    elements = []
    for proj in projectors:
        op = sum(e.conj().T @ proj @ e for e in lifted)
        elements.append((op + op.conj().T) / 2)
    return Povm(elements)


def _corrected(povm: Povm, m: int, d_out: int, d_b: int) -> Povm:
    """(U_m^dagger ⊗ 1) N (U_m ⊗ 1) on (B'', B)."""
    u = np.kron(pauli(m, d_out), np.eye(d_b))
    return Povm([u.conj().T @ e @ u for e in povm.elements])


def eaqc_to_eacc(p: EaqcProtocol, priors=None, with_distinguishability=True):
    """
    Teleport Alice's channel output to Bob over an extra |phi+> of side d'

    Shared systems are ordered (A, A'', B'', B). Alice applies E_x and
    Bell-measures (C, A''), sending the d'^2-valued outcome; Bob undoes the
    Pauli on B'' and measures the original N_{z|y}. Every message occurs with
    probability 1/d'^2 whatever x is.

    Returns:
        tuple: (EaccProtocol, TransformReport)
    """
    d_a, d_b = p.dims
    d_out = p.out_dim
    pair = phi_plus(d_out).projector()
    joint = np.kron(p.shared.matrix, pair)
    shared = permute_systems(joint, [d_a, d_b, d_out, d_out], [0, 2, 3, 1])

    projectors = bell_projectors(d_out)
    alice = tuple(_alice_povm(c, projectors, d_out) for c in p.channels)
    n_msg = d_out * d_out
    bob = tuple(
        tuple(_corrected(povm, m, d_out, d_b) for m in range(n_msg)) for povm in p.bob_povms
    )
    eacc = EaccProtocol(
        shared=DensityState(shared),
        dims=(d_a * d_out, d_out * d_b),
        alice_povms=alice,
        message_fn=np.tile(np.arange(n_msg), (len(alice), 1)),
        bob_povms=bob,
    )

    uniformity = 0.0
    for povm in alice:
        for e in povm.elements:
            prob = float(np.real(np.trace(steered_operator(eacc.shared, e, eacc.dims))))
            uniformity = max(uniformity, abs(prob - 1.0 / n_msg))

    deviation = eaqc_correlations(p).max_deviation(eacc_correlations(eacc))
    before = after = None
    if with_distinguishability:
        before = eaqc_distinguishability(p, priors)
        after = eacc_distinguishability(eacc, priors)
    logger.debug(
        f"eaqc_to_eacc: d'={d_out}, table deviation {deviation:.2e}, "
        f"message uniformity {uniformity:.2e}"
    )
    report = TransformReport(
        deviation, before, after, dims_used=(d_a, d_b, d_out), message_uniformity_deviation=uniformity
    )
    return eacc, report
