from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from ..errors import ValidationError


def as_matrix(m) -> np.ndarray:
    """Return ``m`` as a read-only complex128 2-d array."""
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    if arr.ndim != 2:
        raise ValueError(f"Expected a matrix, got array of shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("Matrix entries must be finite")
    arr.setflags(write=False)
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _raise_if_invalid(obj):
    # Imported here to keep objects free of a module-level cycle
    from .validation import validate

    report = validate(obj)
    if not report.ok:
        raise ValidationError(
            f"Invalid {type(obj).__name__}: {report.summary()}", report=report
        )


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if not np.all(np.isfinite(amps)):
            raise ValueError("Amplitudes must be finite")
        object.__setattr__(self, "amplitudes", _freeze(amps))
        if self.check:
            _raise_if_invalid(self)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @classmethod
    def basis(cls, dim: int, index: int) -> "PureState":
        amps = np.zeros(dim, dtype=np.complex128)
        amps[index] = 1.0
        return cls(amps)

    @classmethod
    def normalized(cls, amplitudes) -> "PureState":
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        return cls(amps / np.linalg.norm(amps))

    def projector(self) -> np.ndarray:
        return _freeze(np.outer(self.amplitudes, self.amplitudes.conj()))

    def density(self) -> "DensityState":
        return DensityState(self.projector())


@dataclass(frozen=True, eq=False)
class DensityState:
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", as_matrix(self.matrix))
        if self.check:
            _raise_if_invalid(self)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityState":
        return cls(np.eye(dim) / dim)

    def expectation(self, operator) -> float:
        return float(np.real(np.trace(self.matrix @ np.asarray(operator))))


@dataclass(frozen=True, eq=False)
class Povm:
    elements: Tuple[np.ndarray, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        elements = tuple(as_matrix(e) for e in self.elements)
        if not elements:
            raise ValueError("A POVM needs at least one element")
        object.__setattr__(self, "elements", elements)
        if self.check:
            _raise_if_invalid(self)

    @property
    def outcomes(self) -> int:
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.elements[0].shape[0]

    @classmethod
    def from_basis(cls, vectors) -> "Povm":
        """Projective measurement onto the given orthonormal vectors."""
        return cls([np.outer(v, np.conj(v)) for v in np.asarray(vectors)])

    @classmethod
    def computational(cls, dim: int) -> "Povm":
        return cls.from_basis(np.eye(dim))

    def probabilities(self, rho) -> np.ndarray:
        matrix = rho.matrix if isinstance(rho, DensityState) else np.asarray(rho)
        return np.array([np.real(np.trace(e @ matrix)) for e in self.elements])

    def relabeled(self, order: List[int]) -> "Povm":
        """POVM whose outcome ``k`` is this POVM's outcome ``order[k]``."""
        return Povm([self.elements[i] for i in order], check=self.check)


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus_ops: Tuple[np.ndarray, ...]
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus_ops)
        if not ops:
            raise ValueError("A channel needs at least one Kraus operator")
        shapes = {k.shape for k in ops}
        if len(shapes) != 1:
            raise ValueError(f"Kraus operators have mixed shapes {sorted(shapes)}")
        object.__setattr__(self, "kraus_ops", ops)
        if self.check:
            _raise_if_invalid(self)

    @property
    def in_dim(self) -> int:
        return self.kraus_ops[0].shape[1]

    @property
    def out_dim(self) -> int:
        return self.kraus_ops[0].shape[0]

    @classmethod
    def unitary(cls, u) -> "KrausChannel":
        return cls([u])

    @classmethod
    def identity(cls, dim: int) -> "KrausChannel":
        return cls([np.eye(dim)])
