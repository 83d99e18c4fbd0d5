import numpy as np

from ..config import logger
from ..qcore import DensityState, KrausChannel, Povm, phi_plus
from ..qcore.linalg import hermitian_sqrt, permute_systems
from ..protocols import (
    EaccProtocol,
    EaqcProtocol,
    eacc_correlations,
    eacc_distinguishability,
    eaqc_correlations,
    eaqc_distinguishability,
)
from .paulis import bell_projectors, dense_coding_dim, pauli
from .report import TransformReport


def _alice_channel(povm: Povm, messages, d_a: int, k: int) -> KrausChannel:
    """Measure M_{a|x} on A, then encode f(a,x) with U on A'; output is A'."""
    ops = []
    for a, effect in enumerate(povm.elements):
        root = hermitian_sqrt(effect)
        u = pauli(int(messages[a]), k)
        for i in range(d_a):
            ops.append(np.kron(root[i : i + 1, :], u))
    return KrausChannel(ops)


def _bob_povm(row, d_b: int, k: int) -> Povm:
    """sum_m Bell_m ⊗ N_{z|y,m} on (A', B'), B, reordered to (A', B, B')."""
    n_z = row[0].outcomes
    projectors = bell_projectors(k)
    elements = []
    for z in range(n_z):
        op = np.zeros((k * k * d_b,) * 2, dtype=np.complex128)
        for m, bell in enumerate(projectors):
            if m < len(row):
                n = row[m].elements[z]
            else:
                # symbols never emitted are read as the first outcome
                n = np.eye(d_b) if z == 0 else np.zeros((d_b, d_b))
            op += np.kron(bell, n)
        elements.append(permute_systems(op, [k, k, d_b], [0, 2, 1]))
    return Povm(elements)


def eacc_to_eaqc(p: EaccProtocol, R: int = None, priors=None, with_distinguishability=True):
    """
    Send the EACC message by dense coding on an extra |phi+> of side ceil(sqrt(R))

    The shared state becomes sigma ⊗ phi+ ordered (A, A', B, B'). Alice's
    channel measures M_{a|x} and applies U_{f(a,x)} to A'; Bob measures the Bell
    basis on (A', B') and then N_{z|y,m} on B.

    Returns:
        tuple: (EaqcProtocol, TransformReport)
    """
    R = p.n_messages if R is None else int(R)
    if R < 1:
        raise ValueError("R must be at least 1")
    if R < p.n_messages:
        raise ValueError(f"R={R} cannot carry {p.n_messages} messages")
    k = dense_coding_dim(R)
    d_a, d_b = p.dims

    pair = phi_plus(k).projector()
    joint = np.kron(p.shared.matrix, pair)
    shared = permute_systems(joint, [d_a, d_b, k, k], [0, 2, 1, 3])

    channels = tuple(
        _alice_channel(povm, p.message_fn[x], d_a, k)
        for x, povm in enumerate(p.alice_povms)
    )
    bob = tuple(_bob_povm(row, d_b, k) for row in p.bob_povms)
    eaqc = EaqcProtocol(
        shared=DensityState(shared),
        dims=(d_a * k, d_b * k),
        channels=channels,
        bob_povms=bob,
    )
    deviation = eacc_correlations(p).max_deviation(eaqc_correlations(eaqc))
    before = after = None
    if with_distinguishability:
        before = eacc_distinguishability(p, priors)
        after = eaqc_distinguishability(eaqc, priors)
    logger.debug(f"eacc_to_eaqc: R={R}, side dim {k}, table deviation {deviation:.2e}")
    return eaqc, TransformReport(deviation, before, after, dims_used=(d_a, d_b, k))
