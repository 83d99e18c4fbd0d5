from dataclasses import dataclass, field
from typing import List

import numpy as np

from ..config import tolerances
from ..errors import ValidationError
from .objects import DensityState, KrausChannel, Povm, PureState


@dataclass
class Violation:
    invariant: str
    magnitude: float
    tolerance: float
    where: str = ""

    def __str__(self):
        where = f" at {self.where}" if self.where else ""
        return f"{self.invariant}{where}: {self.magnitude:.3e} (tol {self.tolerance:.0e})"


@dataclass
class ValidationReport:
    subject: str
    violations: List[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, invariant, magnitude, tolerance, where=""):
        self.violations.append(Violation(invariant, float(magnitude), tolerance, where))

    def names(self):
        return [v.invariant for v in self.violations]

    def summary(self) -> str:
        if self.ok:
            return "ok"
        return "; ".join(str(v) for v in self.violations)


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def eigvalsh_checked(m: np.ndarray, tol: float = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix; non-Hermitian input is rejected."""
    tol = tolerances["hermitian"] if tol is None else tol
    err = hermiticity_error(m)
    if err > tol:
        raise ValidationError(f"Matrix is not Hermitian (deviation {err:.3e})")
    return np.linalg.eigvalsh((m + m.conj().T) / 2)


def _check_operator(report, m, where, psd_tol, herm_tol):
    herm = hermiticity_error(m)
    if herm > herm_tol:
        report.add("hermitian", herm, herm_tol, where)
        return
    lowest = np.linalg.eigvalsh((m + m.conj().T) / 2)[0]
    if lowest < -psd_tol:
        report.add("psd", -lowest, psd_tol, where)


def validate(obj) -> ValidationReport:
    """List the violated invariants of a state, POVM or channel with their magnitudes."""
    report = ValidationReport(type(obj).__name__)

    if isinstance(obj, PureState):
        norm_err = abs(np.linalg.norm(obj.amplitudes) - 1.0)
        if norm_err > tolerances["norm"]:
            report.add("norm", norm_err, tolerances["norm"])

    elif isinstance(obj, DensityState):
        m = obj.matrix
        if m.shape[0] != m.shape[1]:
            report.add("square", abs(m.shape[0] - m.shape[1]), 0)
            return report
        _check_operator(report, m, "", tolerances["psd"], tolerances["hermitian"])
        trace_err = abs(np.trace(m) - 1.0)
        if trace_err > tolerances["trace"]:
            report.add("trace", trace_err, tolerances["trace"])

    elif isinstance(obj, Povm):
        dims = {e.shape for e in obj.elements}
        if len(dims) != 1 or any(s[0] != s[1] for s in dims):
            report.add("shape", len(dims), 0)
            return report
        herm_tol = tolerances["povm"]
        for k, e in enumerate(obj.elements):
            _check_operator(report, e, f"element {k}", tolerances["psd"], herm_tol)
        total = sum(obj.elements)
        completeness = np.max(np.abs(total - np.eye(total.shape[0])))
        if completeness > tolerances["povm"]:
            report.add("completeness", completeness, tolerances["povm"])

    elif isinstance(obj, KrausChannel):
        total = sum(k.conj().T @ k for k in obj.kraus_ops)
        completeness = np.max(np.abs(total - np.eye(obj.in_dim)))
        if completeness > tolerances["kraus"]:
            report.add("completeness", completeness, tolerances["kraus"])

    else:
        raise TypeError(f"Cannot validate object of type {type(obj).__name__}")

    return report
