from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence

import cvxpy as cp
import numpy as np

from ..config import logger, solver_settings, threads, tolerances
from ..errors import DimensionMismatchError, SolverConvergenceError
from ..qcore import DensityState, Povm, validate
from ..qcore.linalg import hermitian_sqrt, trace_norm
from .ensemble import DiscriminationResult, Ensemble

_SOLVER_OPTIONS = {
    "CLARABEL": lambda iters: {"max_iter": iters},
    "SCS": lambda iters: {"max_iters": iters, "eps_abs": 1e-9, "eps_rel": 1e-9},
}


def helstrom(rho0: DensityState, rho1: DensityState, w0: float, w1: float) -> float:
    """Two-state optimum: (w0 + w1)/2 + ||w0 rho0 - w1 rho1||_1 / 2."""
    if rho0.dim != rho1.dim:
        raise DimensionMismatchError("Helstrom states must share a dimension")
    return 0.5 * (w0 + w1) + 0.5 * trace_norm(w0 * rho0.matrix - w1 * rho1.matrix)


def solve_sdp(problem: cp.Problem, max_iters: int) -> bool:
    for name in solver_settings["solvers"]:
        if name not in cp.installed_solvers():
            continue
        options = _SOLVER_OPTIONS.get(name, lambda _: {})(max_iters)
        try:
            problem.solve(solver=name, **options)
        except cp.error.SolverError as e:
            logger.warning(f"Solver {name} failed: {e}")
            continue
        if problem.status in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE):
            if problem.status == cp.OPTIMAL_INACCURATE:
                logger.debug(f"Solver {name} returned an inaccurate optimum")
            return True
        logger.warning(f"Solver {name} ended with status {problem.status}")
    return False


def repair_povm(elements: List[np.ndarray]) -> List[np.ndarray]:
    """Project solver output onto an exactly feasible POVM."""
    clipped = []
    for m in elements:
        m = (m + m.conj().T) / 2
        vals, vecs = np.linalg.eigh(m)
        clipped.append((vecs * np.clip(vals, 0.0, None)) @ vecs.conj().T)
    total = sum(clipped)
    inv_sqrt = np.linalg.pinv(hermitian_sqrt(total))
    repaired = [inv_sqrt @ m @ inv_sqrt for m in clipped]
    # pinv leaves the kernel of ``total`` uncovered; hand it to the first outcome
    residual = np.eye(total.shape[0]) - sum(repaired)
    repaired[0] = repaired[0] + (residual + residual.conj().T) / 2
    return [(m + m.conj().T) / 2 for m in repaired]


def _shift_dual(y: np.ndarray, weighted: List[np.ndarray]) -> np.ndarray:
    """Smallest multiple of identity making Y - w_x rho_x PSD for all x."""
    y = (y + y.conj().T) / 2
    worst = 0.0
    for wr in weighted:
        worst = max(worst, -np.linalg.eigvalsh(y - wr)[0])
    return y + worst * np.eye(y.shape[0])


def _primal_value(weighted: List[np.ndarray], elements: Sequence[np.ndarray]) -> float:
    return float(sum(np.real(np.trace(wr @ m)) for wr, m in zip(weighted, elements)))


def _solve_dual(weighted: List[np.ndarray], max_iters: int):
    d = weighted[0].shape[0]
    y = cp.Variable((d, d), hermitian=True)
    problem = cp.Problem(
        cp.Minimize(cp.real(cp.trace(y))), [y - wr >> 0 for wr in weighted]
    )
    if not solve_sdp(problem, max_iters):
        return None
    return _shift_dual(np.asarray(y.value), weighted)


def discriminate(
    e: Ensemble, tol: float = None, strict: bool = True
) -> DiscriminationResult:
    """
    Certified minimum-error discrimination of a weighted ensemble

    Solves max sum_x w_x Tr(rho_x M_x) over POVMs. The returned value is the
    primal value of an exactly feasible POVM (lower bound) and Tr(dual_cert)
    is the value of an exactly feasible dual point (upper bound).

    Args:
        e: ensemble, weights may be sub-normalised
        tol: requested gap, defaults to solver_settings["tol"]
        strict: raise SolverConvergenceError when the gap stays above tol

    Returns:
        DiscriminationResult
    """
    tol = solver_settings["tol"] if tol is None else tol
    max_iters = solver_settings["max_iters"]
    n, d = len(e), e.dim
    weighted = e.weighted_matrices()

    if np.all(e.weights == 0):
        povm = Povm([np.eye(d) / n for _ in range(n)])
        return DiscriminationResult(0.0, povm, np.zeros((d, d), complex), 0.0)

    if n == 1:
        povm = Povm([np.eye(d)])
        y = _shift_dual(weighted[0].copy(), weighted)
        value = _primal_value(weighted, povm.elements)
        return DiscriminationResult(value, povm, y, float(np.real(np.trace(y))) - value)

    ms = [cp.Variable((d, d), hermitian=True) for _ in range(n)]
    objective = cp.Maximize(
        cp.real(sum(cp.trace(wr @ m) for wr, m in zip(weighted, ms)))
    )
    constraints = [m >> 0 for m in ms] + [sum(ms) == np.eye(d)]
    problem = cp.Problem(objective, constraints)

    if solve_sdp(problem, max_iters):
        elements = repair_povm([np.asarray(m.value) for m in ms])
    else:
        logger.warning("Primal SDP failed, falling back to the pretty-good measurement")
        elements = _pretty_good(weighted)

    value = _primal_value(weighted, elements)
    y = _shift_dual(sum(wr @ m for wr, m in zip(weighted, elements)), weighted)
    upper = float(np.real(np.trace(y)))

    if upper - value > tol:
        logger.debug(f"Gap {upper - value:.2e} above {tol:.0e}, solving the dual SDP")
        y_dual = _solve_dual(weighted, max_iters)
        if y_dual is not None and np.real(np.trace(y_dual)) < upper:
            y, upper = y_dual, float(np.real(np.trace(y_dual)))

    result = DiscriminationResult(value, Povm(elements), y, max(upper - value, 0.0))
    if upper - value > tol:
        message = (
            f"Discrimination gap {upper - value:.2e} exceeds tol {tol:.0e}; "
            f"certified interval [{value:.10f}, {upper:.10f}]"
        )
        if strict:
            raise SolverConvergenceError(message, result=result)
        logger.warning(message)
    return result


def _pretty_good(weighted: List[np.ndarray]) -> List[np.ndarray]:
    total = sum(weighted)
    inv_sqrt = np.linalg.pinv(hermitian_sqrt(total))
    return repair_povm([inv_sqrt @ wr @ inv_sqrt for wr in weighted])


def discriminate_many(ensembles: Sequence[Ensemble], tol: float = None, strict=True):
    """Batch evaluation; results come back in input order."""
    if threads <= 1 or len(ensembles) <= 1:
        return [discriminate(e, tol, strict) for e in ensembles]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda e: discriminate(e, tol, strict), ensembles))


@dataclass
class GapReport:
    primal_value: float
    dual_value: float
    gap: float
    stored_gap: float
    primal_feasible: bool
    dual_feasible: bool
    dual_violation: float
    povm_violations: list

    @property
    def consistent(self) -> bool:
        return abs(self.gap - self.stored_gap) <= 1e-10

    @property
    def certified(self) -> bool:
        return self.primal_feasible and self.dual_feasible and self.consistent


def certify(e: Ensemble, r: DiscriminationResult) -> GapReport:
    """Independent re-check of both feasibilities and the stored gap."""
    if r.povm.dim != e.dim or r.dual_cert.shape != (e.dim, e.dim):
        raise DimensionMismatchError("Result dimensions do not match the ensemble")
    if r.povm.outcomes != len(e):
        raise DimensionMismatchError(
            f"POVM has {r.povm.outcomes} outcomes for {len(e)} states"
        )
    weighted = e.weighted_matrices()
    primal = _primal_value(weighted, r.povm.elements)
    y = np.asarray(r.dual_cert)
    herm = float(np.max(np.abs(y - y.conj().T))) if y.size else 0.0
    violation = max(
        max(0.0, -np.linalg.eigvalsh((y + y.conj().T) / 2 - wr)[0]) for wr in weighted
    )
    dual = float(np.real(np.trace(y)))
    report = validate(r.povm)
    return GapReport(
        primal_value=primal,
        dual_value=dual,
        gap=dual - primal,
        stored_gap=r.gap,
        primal_feasible=report.ok,
        dual_feasible=violation <= tolerances["psd"] and herm <= tolerances["hermitian"],
        dual_violation=violation,
        povm_violations=report.names(),
    )
