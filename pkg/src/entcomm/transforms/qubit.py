import numpy as np

from ..config import logger, tolerances
from ..errors import DimensionMismatchError, NonProjectiveMeasurementError, ValidationError
from ..qcore import PureState, Povm, phi_plus
from ..qcore.linalg import orthogonal_complement
from ..protocols import (
    EaccProtocol,
    QcProtocol,
    eacc_correlations,
    eacc_distinguishability,
    qc_correlations,
    qc_distinguishability,
)
from .report import TransformReport


def _pure_qubit(rho) -> PureState:
    if rho.dim != 2:
        raise DimensionMismatchError(f"Expected a qubit state, got dim {rho.dim}")
    vals, vecs = np.linalg.eigh(rho.matrix)
    if abs(vals[-1] - 1.0) > tolerances["psd"]:
        raise ValidationError(f"State is not pure (largest eigenvalue {vals[-1]:.3e})")
    return PureState.normalized(vecs[:, -1])


def _flip_order(povm: Povm):
    """
    Outcome order Bob uses after receiving message 2

    A rank-2 element stays put; two rank-1 projectors swap places.
    """
    tol = tolerances["povm"]
    nonzero = []
    for k, e in enumerate(povm.elements):
        if np.max(np.abs(e)) <= tol:
            continue
        if np.max(np.abs(e @ e - e)) > 1e-8:
            raise NonProjectiveMeasurementError(f"Element {k} is not a projector")
        nonzero.append(k)
    order = list(range(povm.outcomes))
    if len(nonzero) == 1:
        return order
    if len(nonzero) == 2:
        i, j = nonzero
        order[i], order[j] = j, i
        return order
    raise NonProjectiveMeasurementError(
        f"A qubit projective measurement has one or two nonzero elements, got {len(nonzero)}"
    )


def qc_to_eacc(p: QcProtocol, priors=None, with_distinguishability: bool = True):
    """
    Replace a qubit QC protocol by an EACC protocol on |phi+>

    Alice measures {|z*><z*|, |z_perp*><z_perp*|} for her state |z> and sends the
    outcome. The first outcome steers Bob to |z>, the second to |z_perp>; on the
    second message Bob swaps his two rank-1 outcomes, which reproduces
    |<z|k>|^2 because |<z_perp|k_perp>| = |<z|k>| for qubits.

    Returns:
        tuple: (EaccProtocol, TransformReport)
    """
    zetas = [_pure_qubit(rho) for rho in p.states]
    alice = []
    for zeta in zetas:
        perp = orthogonal_complement(zeta)
        alice.append(Povm.from_basis(np.conj([zeta.amplitudes, perp.amplitudes])))

    bob = []
    for povm in p.measurements:
        if povm.dim != 2:
            raise DimensionMismatchError("Bob must measure a qubit")
        bob.append((povm, povm.relabeled(_flip_order(povm))))

    eacc = EaccProtocol(
        shared=phi_plus(2),
        dims=(2, 2),
        alice_povms=tuple(alice),
        message_fn=np.tile([0, 1], (len(alice), 1)),
        bob_povms=tuple(bob),
    )
    deviation = qc_correlations(p).max_deviation(eacc_correlations(eacc))
    before = after = None
    if with_distinguishability:
        before = qc_distinguishability(p, priors)
        after = eacc_distinguishability(eacc, priors)
    report = TransformReport(deviation, before, after, dims_used=(2, 2))
    logger.debug(f"qc_to_eacc: table deviation {deviation:.2e}")
    return eacc, report
