from typing import Sequence, Tuple

import numpy as np
from scipy.stats import unitary_group

from ..errors import DimensionMismatchError
from .objects import DensityState, KrausChannel, Povm, PureState


def tensor(a, b) -> np.ndarray:
    """Kronecker product; vectors stay vectors, matrices stay matrices."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def tensor_all(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.complex128)
    for op in ops:
        out = np.kron(out, np.asarray(op, dtype=np.complex128))
    return out


def partial_trace(m, dims: Tuple[int, int], keep: str = "B") -> np.ndarray:
    """
    Trace out one side of a bipartite operator

    Args:
        m: (dA*dB) x (dA*dB) operator
        dims: (dA, dB)
        keep: "A" or "B", the subsystem that survives

    Returns:
        np.ndarray: reduced operator on the kept subsystem
    """
    m = np.asarray(m, dtype=np.complex128)
    d_a, d_b = dims
    if m.shape != (d_a * d_b, d_a * d_b):
        raise DimensionMismatchError(
            f"Operator of shape {m.shape} does not match dims {dims}"
        )
    blocks = m.reshape(d_a, d_b, d_a, d_b)
    if keep == "A":
        return np.einsum("ijkj->ik", blocks)
    if keep == "B":
        return np.einsum("ijil->jl", blocks)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def permute_systems(m, dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of a state vector or operator."""
    m = np.asarray(m, dtype=np.complex128)
    dims = list(dims)
    n = len(dims)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order {order} is not a permutation of {n} systems")
    total = int(np.prod(dims))
    new_dims = [dims[i] for i in order]
    if m.ndim == 1:
        return m.reshape(dims).transpose(order).reshape(total)
    tensor_form = m.reshape(dims + dims)
    axes = list(order) + [n + i for i in order]
    return tensor_form.transpose(axes).reshape(int(np.prod(new_dims)), -1)


def make_entangled(theta: float, d: int = 2) -> PureState:
    """cos(theta)|00> + sin(theta)|11> for d = 2, the uniform |phi+> for d > 2."""
    if d < 2:
        raise ValueError("Entangled states need d >= 2")
    amps = np.zeros(d * d, dtype=np.complex128)
    if d == 2:
        amps[0] = np.cos(theta)
        amps[3] = np.sin(theta)
    else:
        for i in range(d):
            amps[i * d + i] = 1.0 / np.sqrt(d)
    return PureState(amps)


def phi_plus(d: int) -> PureState:
    return make_entangled(np.pi / 4, d) if d == 2 else make_entangled(0.0, d)


def conjugate(s: PureState) -> PureState:
    return PureState(np.conj(s.amplitudes))


def orthogonal_complement(s: PureState) -> PureState:
    """The qubit state orthogonal to ``s`` (phase convention: -b*, a*)."""
    if s.dim != 2:
        raise DimensionMismatchError("Orthogonal complement is only defined for qubits")
    a, b = s.amplitudes
    return PureState([-np.conj(b), np.conj(a)])


def apply_kraus(c: KrausChannel, rho: DensityState) -> DensityState:
    if c.in_dim != rho.dim:
        raise DimensionMismatchError(
            f"Channel input dimension {c.in_dim} does not match state dimension {rho.dim}"
        )
    out = sum(k @ rho.matrix @ k.conj().T for k in c.kraus_ops)
    return DensityState((out + out.conj().T) / 2)


def lift_on_first(c: KrausChannel, dim_rest: int) -> KrausChannel:
    """Channel acting as ``c`` on the first factor and as identity on the rest."""
    eye = np.eye(dim_rest)
    return KrausChannel([np.kron(k, eye) for k in c.kraus_ops])


def hermitian_sqrt(m) -> np.ndarray:
    vals, vecs = np.linalg.eigh((np.asarray(m) + np.asarray(m).conj().T) / 2)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def trace_norm(m) -> float:
    vals = np.linalg.eigvalsh((np.asarray(m) + np.asarray(m).conj().T) / 2)
    return float(np.sum(np.abs(vals)))


def nearest_unitary(m) -> np.ndarray:
    u, _, vh = np.linalg.svd(np.asarray(m, dtype=np.complex128))
    return u @ vh


# Random objects


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    return unitary_group.rvs(dim, random_state=rng) if dim > 1 else np.eye(1)


def random_pure_state(dim: int, rng: np.random.Generator) -> PureState:
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return PureState.normalized(amps)


def random_density(dim: int, rng: np.random.Generator, rank: int = None) -> DensityState:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho)
    return DensityState((rho + rho.conj().T) / 2)


def random_channel(
    in_dim: int, out_dim: int, rng: np.random.Generator, n_kraus: int = 2
) -> KrausChannel:
    """Random channel from a Haar isometry (Stinespring dilation)."""
    if out_dim * n_kraus < in_dim:
        raise ValueError("Need out_dim * n_kraus >= in_dim for an isometry")
    isometry = random_unitary(out_dim * n_kraus, rng)[:, :in_dim]
    ops = [isometry[k * out_dim : (k + 1) * out_dim, :] for k in range(n_kraus)]
    return KrausChannel(ops)


def random_projective(dim: int, rng: np.random.Generator) -> Povm:
    return Povm.from_basis(random_unitary(dim, rng).T)


def random_povm(dim: int, outcomes: int, rng: np.random.Generator) -> Povm:
    """M_k = V_k^dagger V_k with V_k the k-th block of a Haar isometry."""
    isometry = random_unitary(dim * outcomes, rng)[:, :dim]
    blocks = [isometry[k * dim : (k + 1) * dim, :] for k in range(outcomes)]
    elements = [b.conj().T @ b for b in blocks]
    return Povm([(e + e.conj().T) / 2 for e in elements])


# Qubit helpers

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


def bloch_operator(r) -> np.ndarray:
    """r . sigma for a real 3-vector r."""
    rx, ry, rz = (float(v) for v in r)
    return rx * SIGMA_X + ry * SIGMA_Y + rz * SIGMA_Z


def bloch_state(r) -> PureState:
    """Pure qubit state with unit Bloch vector r."""
    r = np.asarray(r, dtype=float)
    vals, vecs = np.linalg.eigh(bloch_operator(r / np.linalg.norm(r)))
    return PureState.normalized(vecs[:, -1])


def binary_measurement(r) -> Povm:
    """Projective measurement along the unit Bloch vector r; outcome 0 is +1."""
    r = np.asarray(r, dtype=float)
    op = bloch_operator(r / np.linalg.norm(r))
    return Povm([(np.eye(2) + op) / 2, (np.eye(2) - op) / 2])
