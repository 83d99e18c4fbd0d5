"""
See-saw search for EACC and qubit QC protocols

Each round fixes one party and solves the other party's problem exactly: an
SDP over Alice's POVMs (optionally under a distinguishability budget) and one
discrimination-type SDP per (y, message) for Bob. A half-step is only
accepted when it does not lower the objective, so every trace is monotone.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import List, Optional, Sequence

import cvxpy as cp
import numpy as np

from ..classical.facets import FacetInequality
from ..config import logger, seesaw_settings, solver_settings, threads
from ..discrimination.solver import repair_povm, solve_sdp
from ..errors import InfeasibleCapError, TargetUnreachableError
from ..protocols import (
    EaccProtocol,
    QcProtocol,
    eacc_correlations,
    eacc_distinguishability,
    qc_correlations,
    qc_distinguishability,
    success_metric,
)
from ..protocols.correlations import steered_assemblage
from ..qcore import DensityState, Povm, PureState, phi_plus
from ..qcore.linalg import partial_trace, random_povm, random_projective, random_pure_state
from ..tasks.base import Task, clip_bound, uniform
from .models import SearchResult, SeesawConfig

# Largest objective drop tolerated when accepting a half-step
_MONOTONE_TOL = 1e-9


def facet_task(f: FacetInequality) -> Task:
    """
    Prepare-and-measure task whose score is the facet's left-hand side

    Bob has a single setting, so the task has shape (n_x, 1, n_z). The
    classical distinguishability needed for a score s is read off the facet.
    """
    n_x, _ = f.scenario
    return Task(
        np.asarray(f.coefficients)[:, None, :],
        uniform(n_x),
        "facet",
        {"label": f.label, "rhs_slope": f.rhs_slope, "rhs_constant": f.rhs_constant},
        bound=lambda s: clip_bound((s - f.rhs_constant) / f.rhs_slope, 1.0 / n_x),
    )


def _as_task(task_or_facet) -> Task:
    if isinstance(task_or_facet, FacetInequality):
        return facet_task(task_or_facet)
    return task_or_facet


def _ratio(task: Task, s: float, d: float) -> Optional[float]:
    bound = task.classical_bound(s)
    if bound is None or d <= 0:
        return None
    return bound / d


def _best_povm(operators: Sequence[np.ndarray]) -> Optional[List[np.ndarray]]:
    """argmax_N sum_z Tr(N_z B_z) over POVMs; None when no solver succeeds."""
    d = operators[0].shape[0]
    ms = [cp.Variable((d, d), hermitian=True) for _ in operators]
    objective = cp.Maximize(
        cp.real(sum(cp.trace(((b + b.conj().T) / 2) @ m) for b, m in zip(operators, ms)))
    )
    problem = cp.Problem(objective, [m >> 0 for m in ms] + [sum(ms) == np.eye(d)])
    if not solve_sdp(problem, solver_settings["max_iters"]):
        return None
    return repair_povm([np.asarray(m.value) for m in ms])


# EACC


def _shared_blocks(shared: DensityState, dims):
    """blocks[j][i] = <j|_A sigma |i>_A, so Tr_A[(M ⊗ 1) sigma] = sum_ij M[i, j] blocks[j][i]."""
    d_a, d_b = dims
    sigma = shared.matrix.reshape(d_a, d_b, d_a, d_b)
    return [[sigma[j, :, i, :] for i in range(d_a)] for j in range(d_a)]


def _alice_operators(task: Task, p: EaccProtocol):
    """A[x][m] = Tr_B[(1 ⊗ Q_{m|x}) sigma] with Q_{m|x} = sum_{y,z} c(x,y,z) N_{z|y,m}."""
    d_a, d_b = p.dims
    eye = np.eye(d_a)
    out = []
    for x in range(task.n_x):
        row = []
        for m in range(p.n_messages):
            q = sum(
                task.coefficients[x, y, z] * p.bob_povms[y][m].elements[z]
                for y in range(task.n_y)
                for z in range(task.n_z)
            )
            a = partial_trace(np.kron(eye, q) @ p.shared.matrix, p.dims, keep="A")
            row.append((a + a.conj().T) / 2)
        out.append(row)
    return out


def _alice_step(task: Task, p: EaccProtocol, d_budget: Optional[float]):
    d_a, d_b = p.dims
    n_m = p.n_messages
    weights = _alice_operators(task, p)
    ms = [[cp.Variable((d_a, d_a), hermitian=True) for _ in range(n_m)] for _ in range(task.n_x)]
    objective = cp.Maximize(
        cp.real(
            sum(
                cp.trace(weights[x][m] @ ms[x][m])
                for x in range(task.n_x)
                for m in range(n_m)
            )
        )
    )
    constraints = []
    for row in ms:
        constraints += [m >> 0 for m in row]
        constraints.append(sum(row) == np.eye(d_a))

    if d_budget is not None:
        # Y_m >= p_x rho~_{m|x} for all x bounds the per-message discrimination value
        blocks = _shared_blocks(p.shared, p.dims)
        ys = [cp.Variable((d_b, d_b), hermitian=True) for _ in range(n_m)]
        for m in range(n_m):
            for x in range(task.n_x):
                steered = sum(
                    ms[x][m][i, j] * blocks[j][i] for i in range(d_a) for j in range(d_a)
                )
                steered = (steered + steered.H) / 2
                constraints.append(ys[m] - task.priors[x] * steered >> 0)
        constraints.append(cp.real(sum(cp.trace(y) for y in ys)) <= d_budget)

    problem = cp.Problem(objective, constraints)
    if not solve_sdp(problem, solver_settings["max_iters"]):
        return None
    return tuple(Povm(repair_povm([np.asarray(m.value) for m in row])) for row in ms)


def _bob_step(task: Task, p: EaccProtocol):
    steered = steered_assemblage(p)
    bob = []
    for y in range(task.n_y):
        row = []
        for m in range(p.n_messages):
            operators = []
            for z in range(task.n_z):
                b = np.zeros((p.dims[1], p.dims[1]), dtype=np.complex128)
                for x in range(task.n_x):
                    for a in range(p.alice_povms[x].outcomes):
                        if p.message(a, x) == m:
                            b += task.coefficients[x, y, z] * steered[x][a]
                operators.append(b)
            elements = _best_povm(operators)
            if elements is None:
                return None
            row.append(Povm(elements))
        bob.append(tuple(row))
    return tuple(bob)


def _eacc_value(task: Task, p: EaccProtocol) -> float:
    return success_metric(task, eacc_correlations(p))


def _random_eacc(task: Task, cfg: SeesawConfig, shared, rng) -> EaccProtocol:
    d_a, d_b = cfg.dims
    n_m = cfg.n_messages
    alice = tuple(random_povm(d_a, n_m, rng) for _ in range(task.n_x))
    bob = tuple(
        tuple(random_povm(d_b, task.n_z, rng) for _ in range(n_m)) for _ in range(task.n_y)
    )
    return EaccProtocol(
        shared=shared,
        dims=cfg.dims,
        alice_povms=alice,
        message_fn=np.tile(np.arange(n_m), (task.n_x, 1)),
        bob_povms=bob,
    )


def _eacc_restart(task: Task, cfg: SeesawConfig, shared, d_budget, index: int):
    rng = np.random.default_rng([cfg.rng_seed, index])
    protocol = _random_eacc(task, cfg, shared, rng)
    value = _eacc_value(task, protocol)
    trace = [value]
    within_budget = d_budget is None

    for round_index in range(cfg.max_rounds):
        start = value
        alice = _alice_step(task, protocol, d_budget)
        if alice is not None:
            candidate = replace(protocol, alice_povms=alice)
            new = _eacc_value(task, candidate)
            if not within_budget:
                # first budgeted iterate, the trace starts here
                protocol, value, trace = candidate, new, [new]
                within_budget = True
            elif new >= value - _MONOTONE_TOL:
                protocol, value = candidate, max(new, value)
                trace.append(value)

        if within_budget:
            bob = _bob_step(task, protocol)
            if bob is not None:
                candidate = replace(protocol, bob_povms=bob)
                new = _eacc_value(task, candidate)
                if new >= value - _MONOTONE_TOL:
                    protocol, value = candidate, max(new, value)
                    trace.append(value)

        if round_index > 0 and value - start < cfg.convergence_eps:
            logger.debug(f"Restart {index} converged after {round_index + 1} rounds at {value:.8f}")
            break
    else:
        if cfg.max_rounds > 0:
            logger.debug(f"Restart {index} stopped at max_rounds with {value:.8f}")
    return protocol, trace


def _run_restarts(run, restarts: int):
    if threads <= 1 or restarts <= 1:
        return [run(i) for i in range(restarts)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(run, range(restarts)))


def _select(candidates):
    """Highest S, then lowest D, then lowest restart index."""
    return min(
        range(len(candidates)),
        key=lambda i: (-round(candidates[i][0], 9), round(candidates[i][1], 9), i),
    )


def seesaw_eacc(
    task_or_facet,
    cfg: SeesawConfig = None,
    d_budget: float = None,
    shared=None,
) -> SearchResult:
    """
    Search EACC protocols with a high score at low distinguishability

    Args:
        task_or_facet: Task or FacetInequality (turned into a single-setting task)
        cfg: search settings, SeesawConfig() by default
        d_budget: optional cap on the distinguishability of Alice's inputs
        shared: shared state, the maximally entangled state of dims by default

    Returns:
        SearchResult: best restart, S and D recomputed from the stored protocol
    """
    cfg = SeesawConfig() if cfg is None else cfg
    task = _as_task(task_or_facet)
    if shared is None:
        if cfg.dims[0] != cfg.dims[1]:
            raise ValueError(f"Unequal dims {cfg.dims} need an explicit shared state")
        shared = phi_plus(cfg.dims[0]).density()
    elif isinstance(shared, PureState):
        shared = shared.density()
    if d_budget is not None and d_budget < task.guessing_floor - seesaw_settings["budget_tol"]:
        raise InfeasibleCapError(
            f"Budget {d_budget} is below the guessing floor {task.guessing_floor}"
        )

    logger.info(
        f"See-saw on {task.family} task {task.coefficients.shape}: "
        f"{cfg.restarts} restarts, dims {cfg.dims}, budget {d_budget}"
    )
    runs = _run_restarts(lambda i: _eacc_restart(task, cfg, shared, d_budget, i), cfg.restarts)

    scored = []
    for protocol, _ in runs:
        s = _eacc_value(task, protocol)
        d = eacc_distinguishability(protocol, priors=task.priors)
        scored.append((s, d))
    best = _select(scored)
    s, d = scored[best]
    if d_budget is not None and d > d_budget + seesaw_settings["budget_tol"]:
        logger.warning(f"Best protocol has D={d:.6f} above the budget {d_budget}")

    result = SearchResult(
        protocol=runs[best][0],
        success=s,
        distinguishability=d,
        ratio=_ratio(task, s, d),
        trace=[t for _, t in runs],
        restart=best,
        config=cfg,
        d_budget=d_budget,
    )
    logger.info(f"See-saw best: S={s:.6f}, D={d:.6f}, ratio={result.ratio}")
    return result


# Qubit QC


def _qubit_projective(n_z: int, rng) -> Povm:
    elements = [np.zeros((2, 2), dtype=np.complex128) for _ in range(n_z)]
    if n_z == 1:
        elements[0] = np.eye(2)
        return Povm(elements)
    basis = random_projective(2, rng).elements
    for z, e in zip(rng.choice(n_z, size=2, replace=False), basis):
        elements[int(z)] = e
    return Povm(elements)


def _state_step(task: Task, p: QcProtocol):
    states = []
    for x in range(task.n_x):
        a = sum(
            task.coefficients[x, y, z] * p.measurements[y].elements[z]
            for y in range(task.n_y)
            for z in range(task.n_z)
        )
        _, vecs = np.linalg.eigh((a + a.conj().T) / 2)
        states.append(PureState.normalized(vecs[:, -1]).density())
    return tuple(states)


def _best_projective(operators: Sequence[np.ndarray]) -> Povm:
    """
    Best projective qubit measurement for sum_z Tr(N_z B_z)

    Either one outcome takes the identity, or a rank-one pair (P, 1 - P) is
    split between outcomes z1 and z2; the latter is worth
    Tr B_z2 + lambda_max(B_z1 - B_z2).
    """
    n_z = len(operators)
    ops = [(b + b.conj().T) / 2 for b in operators]
    best_value = -np.inf
    best = None
    for z in range(n_z):
        value = float(np.real(np.trace(ops[z])))
        if value > best_value + 1e-12:
            best_value, best = value, (z, None, None)
    for z1 in range(n_z):
        for z2 in range(n_z):
            if z1 == z2:
                continue
            vals, vecs = np.linalg.eigh(ops[z1] - ops[z2])
            value = float(np.real(np.trace(ops[z2]))) + vals[-1]
            if value > best_value + 1e-12:
                best_value, best = value, (z1, z2, vecs[:, -1])
    elements = [np.zeros((2, 2), dtype=np.complex128) for _ in range(n_z)]
    z1, z2, vec = best
    if z2 is None:
        elements[z1] = np.eye(2)
    else:
        projector = np.outer(vec, vec.conj())
        elements[z1] = projector
        elements[z2] = np.eye(2) - projector
    return Povm(elements)


def _measurement_step(task: Task, p: QcProtocol):
    return tuple(
        _best_projective(
            [
                sum(task.coefficients[x, y, z] * p.states[x].matrix for x in range(task.n_x))
                for z in range(task.n_z)
            ]
        )
        for y in range(task.n_y)
    )


def _qc_value(task: Task, p: QcProtocol) -> float:
    return success_metric(task, qc_correlations(p))


def _qc_restart(task: Task, cfg: SeesawConfig, index: int):
    rng = np.random.default_rng([cfg.rng_seed, index])
    states = tuple(random_pure_state(2, rng).density() for _ in range(task.n_x))
    measurements = tuple(_qubit_projective(task.n_z, rng) for _ in range(task.n_y))
    protocol = QcProtocol(states, measurements)
    value = _qc_value(task, protocol)
    trace = [value]
    for round_index in range(cfg.max_rounds):
        start = value
        for step in (_state_step, _measurement_step):
            field_name = "states" if step is _state_step else "measurements"
            candidate = replace(protocol, **{field_name: step(task, protocol)})
            new = _qc_value(task, candidate)
            if new >= value - _MONOTONE_TOL:
                protocol, value = candidate, max(new, value)
                trace.append(value)
        if value - start < cfg.convergence_eps:
            break
    return protocol, trace


def seesaw_qc(task: Task, target_s: float = None, cfg: SeesawConfig = None) -> QcProtocol:
    """
    Qubit QC protocol with pure states and projective measurements

    Args:
        task: task from the tasks module
        target_s: raise TargetUnreachableError when the best score stays below
            target_s by more than seesaw_settings["target_tol"]
        cfg: search settings; only dims[0] = 2 is supported

    Returns:
        QcProtocol
    """
    cfg = SeesawConfig() if cfg is None else cfg
    if cfg.dims[0] != 2:
        raise ValueError(f"seesaw_qc searches qubit protocols, got dimension {cfg.dims[0]}")
    runs = _run_restarts(lambda i: _qc_restart(task, cfg, i), cfg.restarts)
    scored = [
        (_qc_value(task, p), qc_distinguishability(p, priors=task.priors)) for p, _ in runs
    ]
    best = _select(scored)
    s, d = scored[best]
    logger.info(f"Qubit see-saw on {task.family}: S={s:.6f}, D_Q={d:.6f}")

    if target_s is not None and s < target_s - seesaw_settings["target_tol"]:
        result = SearchResult(
            protocol=runs[best][0],
            success=s,
            distinguishability=d,
            ratio=_ratio(task, s, d),
            trace=[t for _, t in runs],
            restart=best,
            config=cfg,
        )
        raise TargetUnreachableError(
            f"Best score {s:.6f} misses the target {target_s:.6f} at dimension 2",
            result=result,
        )
    return runs[best][0]
