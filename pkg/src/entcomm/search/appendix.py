"""
Stored two-outcome EACC protocols for the (3,1,3) and (3,1,4) scenarios

The matrices are stored to the precision they were printed with, so some
of them miss the POVM or unitarity conditions slightly (one effect is not even
Hermitian). The evaluation lists every violation, replaces each effect by its
Hermitian part and the printed unitary by the nearest unitary, and reports the
resulting score and distinguishability next to the reference values.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..classical.facets import FacetInequality, parse_facet
from ..config import logger
from ..discrimination import Ensemble, discriminate
from ..qcore import DensityState, Povm, phi_plus, validate
from ..qcore.linalg import nearest_unitary, partial_trace

_I2 = np.eye(2)


def _binary(first):
    first = np.asarray(first, dtype=np.complex128)
    return [first, _I2 - first]


_SCENARIOS = {
    "A": {
        "facet": "p(2|1)+p(1|3)+p(3|2) <= 3D",
        "n_z": 3,
        "alice": [
            _binary([[9 / 20, -1 / 10 - 3j / 25], [-1 / 10 + 3j / 25, 2 / 5]]),
            _binary([[11 / 25, -3 / 20 - 1j / 10], [-3 / 20 + 1j / 10, 13 / 20]]),
            _binary([[2 / 5, -1 / 10 - 1j / 20], [-1 / 10 + 1j / 20, 11 / 20]]),
        ],
        "bob": [
            np.zeros((2, 2)),
            np.diag([1.0, 0.0]),
            np.diag([0.0, 1.0]),
        ],
        "unitary": [
            [0.1739 + 0.0934j, 0.4797 - 0.8549j],
            [-0.9030 + 0.3817j, -0.0735 - 0.1832j],
        ],
        "reference": {"success": 1.2184, "distinguishability": 0.3726, "ratio": 1.0901},
    },
    "B": {
        "facet": "p(2|1)+p(1|3)+p(3|1)+p(4|2) <= 3D",
        "n_z": 4,
        "alice": [
            _binary([[12 / 25, 2 / 25 - 1j / 20], [2 / 25 + 1j / 20, 3 / 4]]),
            # printed with equal off-diagonal entries
            _binary([[33 / 50, 4 / 25 - 1j / 25], [4 / 25 - 1j / 25, 27 / 50]]),
            _binary([[27 / 50, 1 / 100 + 1j / 25], [1 / 100 - 1j / 25, 17 / 25]]),
        ],
        "bob": [
            np.array([[11 / 50, -4 / 25], [-4 / 25, 3 / 25]]),
            np.array([[2 / 25, -7 / 50], [-7 / 50, 7 / 25]]),
            np.array([[2 / 25, -7 / 50], [-7 / 50, 7 / 25]]),
            None,
        ],
        "unitary": [
            [0.4958 + 0.5831j, -0.6031 - 0.2244j],
            [-0.1595 - 0.6234j, -0.5275 - 0.5546j],
        ],
        "reference": {"success": 1.3162, "distinguishability": 0.3974, "ratio": 1.1039},
    },
}


@dataclass
class AppendixReport:
    which: str
    facet: FacetInequality
    success: float
    distinguishability: float
    ratio: float
    reference_success: float
    reference_distinguishability: float
    reference_ratio: float
    # ||printed unitary - nearest unitary|| in the Frobenius norm
    unitary_distance: float
    table: np.ndarray = field(repr=False)
    violations: List[str] = field(default_factory=list)

    @property
    def success_deviation(self) -> float:
        return self.success - self.reference_success

    @property
    def distinguishability_deviation(self) -> float:
        return self.distinguishability - self.reference_distinguishability

    @property
    def ratio_deviation(self) -> float:
        return self.ratio - self.reference_ratio

    def to_dict(self) -> dict:
        return {
            "which": self.which,
            "facet": self.facet.label,
            "success": self.success,
            "distinguishability": self.distinguishability,
            "ratio": self.ratio,
            "reference_success": self.reference_success,
            "reference_distinguishability": self.reference_distinguishability,
            "reference_ratio": self.reference_ratio,
            "success_deviation": self.success_deviation,
            "distinguishability_deviation": self.distinguishability_deviation,
            "ratio_deviation": self.ratio_deviation,
            "unitary_distance": self.unitary_distance,
            "violations": list(self.violations),
            "table": self.table.tolist(),
        }


def _hermitian(m) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    return (m + m.conj().T) / 2


def _check(elements, name: str, violations: List[str]):
    report = validate(Povm(elements, check=False))
    for v in report.violations:
        violations.append(f"{name}: {v}")


def _psd_part(m: np.ndarray, name: str, violations: List[str]) -> np.ndarray:
    vals, vecs = np.linalg.eigh(_hermitian(m))
    if vals[0] < -1e-12:
        violations.append(f"{name}: steered operator eigenvalue {vals[0]:.3e} clipped")
    return (vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T


def evaluate_appendix(which: str) -> AppendixReport:
    """
    Evaluate the stored protocol "A" (3,1,3) or "B" (3,1,4) on the Bell state

    Alice's outcome is the message. Bob measures the stored POVM on the first
    message and its conjugate U^dagger N U on the second. Invariant violations
    are collected in the report instead of raised.
    """
    which = which.upper()
    if which not in _SCENARIOS:
        raise ValueError(f"Unknown appendix protocol {which!r}, expected 'A' or 'B'")
    data = _SCENARIOS[which]
    n_z = data["n_z"]
    facet = parse_facet(data["facet"], 3, n_z)
    violations: List[str] = []

    bob = [np.asarray(e, dtype=np.complex128) for e in data["bob"] if e is not None]
    if len(bob) < n_z:
        bob.append(_I2 - sum(bob))
    _check(bob, "Bob", violations)

    printed = np.asarray(data["unitary"], dtype=np.complex128)
    unitary = nearest_unitary(printed)
    distance = float(np.linalg.norm(printed - unitary))
    if distance > 1e-9:
        violations.append(f"unitary: distance {distance:.3e} to the nearest unitary")
    bob_by_message = [bob, [unitary.conj().T @ e @ unitary for e in bob]]

    sigma = phi_plus(2).density().matrix
    table = np.zeros((3, n_z))
    blocks = [[np.zeros((2, 2), dtype=np.complex128) for _ in range(3)] for _ in range(2)]
    for x, effects in enumerate(data["alice"]):
        _check(effects, f"Alice x={x + 1}", violations)
        for a, effect in enumerate(effects):
            # linear in the effect, so non-PSD effects are evaluated as printed
            steered = partial_trace(np.kron(_hermitian(effect), _I2) @ sigma, (2, 2), keep="B")
            steered = _hermitian(steered)
            blocks[a][x] = steered / 3
            for z, n in enumerate(bob_by_message[a]):
                table[x, z] += float(np.real(np.trace(steered @ n)))

    success = facet.lhs(table)
    distinguishability = 0.0
    for m, block in enumerate(blocks):
        ops = [_psd_part(op, f"message {m + 1}, x={x + 1}", violations) for x, op in enumerate(block)]
        weights = np.array([float(np.real(np.trace(op))) for op in ops])
        states = tuple(
            DensityState(op / w, check=False) if w > 1e-12 else DensityState.maximally_mixed(2)
            for op, w in zip(ops, weights)
        )
        weights = np.where(weights > 1e-12, weights, 0.0)
        distinguishability += discriminate(Ensemble(states, weights), strict=False).value

    classical_d = (success - facet.rhs_constant) / facet.rhs_slope
    reference = data["reference"]
    report = AppendixReport(
        which=which,
        facet=facet,
        success=float(success),
        distinguishability=float(distinguishability),
        ratio=float(classical_d / distinguishability),
        reference_success=reference["success"],
        reference_distinguishability=reference["distinguishability"],
        reference_ratio=reference["ratio"],
        unitary_distance=distance,
        table=table,
        violations=violations,
    )
    if abs(report.success_deviation) > 1e-3 or abs(report.distinguishability_deviation) > 1e-3:
        logger.warning(
            f"Appendix {which}: S={report.success:.4f} (reference {report.reference_success}), "
            f"D={report.distinguishability:.4f} (reference {report.reference_distinguishability})"
        )
    for v in violations:
        logger.debug(f"Appendix {which} violation: {v}")
    return report
