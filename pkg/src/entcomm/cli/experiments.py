"""
Experiments behind the command line

Each function runs one experiment and returns an ExperimentRun: the record,
the main table, and optionally a protocol and extra tables to store.
"""
import json
from pathlib import Path
from typing import Dict, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd

from ..classical import (
    SCENARIO_313_FACETS,
    SCENARIO_314_FACETS,
    classical_optimum,
    cycle_graph,
    enumerate_vertices,
    load_graph,
    verify_facet,
)
from ..config import logger, recording_settings
from ..discrimination import Ensemble, discriminate
from ..protocols import (
    eacc_correlations,
    eacc_distinguishability,
    qc_correlations,
    qc_distinguishability,
    success_metric,
)
from ..qcore.serialization import state_from_json
from ..search import SeesawConfig, evaluate_appendix, seesaw_eacc, seesaw_qc
from ..tasks import (
    chaturvedi,
    cycle_target_ratio,
    cycle_target_success,
    graph_task,
    pair_task,
    rac_eaqc_reference,
    rac_qc_protocol,
    rac_task,
    tilted_closed_form,
    tilted_eacc_protocol,
    tilted_literal_protocol,
    tilted_qc_image_protocol,
    tilted_qc_protocol,
    tilted_task,
)
from ..tasks.tilted import D_CAP, TiltedParams
from ..transforms import qc_to_eacc
from .records import ExperimentRecord

NPA_NOTE = (
    "No QC advantage in the (3,1,3) and (3,1,4) scenarios is taken from an external "
    "NPA-hierarchy computation and is not re-derived here."
)

# reference values quoted for the tilted task at theta = pi/3
TILTED_REFERENCE = {"theta": np.pi / 3, "C.S": 2.7559, "success_ratio": 1.1475}

# reference ratios and passing minimums of the see-saw searches per scenario
SCENARIO_SEARCH = {
    3: {"facet": SCENARIO_313_FACETS[0], "reference_ratio": 1.0901, "minimum_ratio": 1.08},
    4: {"facet": SCENARIO_314_FACETS[1], "reference_ratio": 1.1039, "minimum_ratio": 1.09},
}


class ExperimentRun(NamedTuple):
    record: ExperimentRecord
    data: pd.DataFrame
    protocol: object = None
    extra_tables: Optional[Dict[str, pd.DataFrame]] = None


def _regimes(rows) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"regime": r, "success": s, "distinguishability": d, "certified": bool(c)}
            for r, s, d, c in rows
        ],
        columns=["regime", "success", "distinguishability", "certified"],
    )


def _qc_and_eacc(task, qc, seed: int):
    """Score the qubit protocol, its EACC image and the classical optimum at the same D."""
    eacc, report = qc_to_eacc(qc, priors=task.priors)
    s_qc = success_metric(task, qc_correlations(qc))
    s_eacc = success_metric(task, eacc_correlations(eacc))
    d_qc = report.distinguishability_before
    d_eacc = report.distinguishability_after
    optimum = classical_optimum(task, d_cap=max(d_eacc, task.guessing_floor), seed=seed)
    rows = [
        ("C", optimum.value, optimum.distinguishability, optimum.certified),
        ("QC", s_qc, d_qc, True),
        ("EACC", s_eacc, d_eacc, True),
    ]
    if report.max_table_deviation > 1e-9:
        logger.warning(f"EACC image deviates from the qubit table by {report.max_table_deviation:.2e}")
    return eacc, optimum, rows


def _record(experiment, inputs, seed, rows, task, optimum) -> ExperimentRecord:
    values = {r: {"S": float(s), "D": float(d)} for r, s, d, _ in rows}
    eacc = values["EACC"]
    record = ExperimentRecord(
        experiment=experiment,
        inputs=inputs,
        values=values,
        classical_distinguishability=task.classical_bound(eacc["S"]),
        eacc_distinguishability=eacc["D"],
        eacc_success=eacc["S"],
        classical_success=float(optimum.value),
        seed=seed,
    )
    if not optimum.certified:
        record.notes.append("classical optimum is a heuristic lower bound")
    return record


def run_rac(n: int, d: int, seed: int = 0) -> ExperimentRun:
    if d != 2 or n not in (2, 3):
        raise ValueError("Stored qubit protocols exist for the (2,2) and (3,2) codes only")
    task = rac_task(n, d)
    eacc, optimum, rows = _qc_and_eacc(task, rac_qc_protocol(n), seed)
    if n == 3:
        ref = rac_eaqc_reference()
        rows.append(("EAQC", ref["success"], ref["unitary_cap"], True))
    record = _record("rac", {"n": n, "d": d}, seed, rows, task, optimum)
    record.targets["distinguishability_ratio"] = (
        np.sqrt(2) if n == 2 else 2 * (np.sqrt(3) - 1)
    )
    if n == 3:
        record.notes.append(
            f"EAQC with eight unitaries: classical bound {ref['classical_bound']:.6f} "
            f"over cap {ref['unitary_cap']} gives {ref['ratio']:.6f}"
        )
    return ExperimentRun(record, _regimes(rows), eacc)


def run_graph(
    cycle: int = None, edges: str = None, restarts: int = 16, seed: int = 0
) -> ExperimentRun:
    if (cycle is None) == (edges is None):
        raise ValueError("Give exactly one of --cycle and --edges")
    g = cycle_graph(cycle) if cycle is not None else load_graph(edges)
    task = graph_task(g)
    target = cycle_target_success(cycle) if cycle is not None else None
    cfg = SeesawConfig(restarts=restarts, rng_seed=seed)
    qc = seesaw_qc(task, target, cfg)
    eacc, optimum, rows = _qc_and_eacc(task, qc, seed)
    inputs = {"cycle": cycle, "edges": edges, "restarts": restarts}
    record = _record("graph", inputs, seed, rows, task, optimum)
    if cycle is not None:
        record.targets["EACC.S"] = target
        record.targets["distinguishability_ratio"] = cycle_target_ratio(cycle)
    return ExperimentRun(record, _regimes(rows), eacc)


def run_pair(n: int, restarts: int = 16, seed: int = 0) -> ExperimentRun:
    task = pair_task(n)
    qc = seesaw_qc(task, None, SeesawConfig(restarts=restarts, rng_seed=seed))
    eacc, optimum, rows = _qc_and_eacc(task, qc, seed)
    record = _record("pair", {"N": n, "restarts": restarts}, seed, rows, task, optimum)
    # the qubit protocol must need strictly more classical distinguishability
    record.minimums["distinguishability_ratio"] = 1.0 + 1e-9
    return ExperimentRun(record, _regimes(rows), eacc)


def run_chaturvedi(restarts: int = 16, seed: int = 0) -> ExperimentRun:
    task = chaturvedi.chaturvedi_task()
    cfg = SeesawConfig(restarts=restarts, rng_seed=seed)
    qc = seesaw_qc(task, chaturvedi.TARGET_SUCCESS, cfg)
    eacc, optimum, rows = _qc_and_eacc(task, qc, seed)
    record = _record("chaturvedi", {"restarts": restarts}, seed, rows, task, optimum)
    record.targets["EACC.S"] = chaturvedi.TARGET_SUCCESS
    record.targets["distinguishability_ratio"] = chaturvedi.TARGET_RATIO
    return ExperimentRun(record, _regimes(rows), eacc)


def _tilted_values(theta: float, seed: int):
    task, _ = tilted_task(theta)
    optimum = classical_optimum(task, D_CAP, n_messages=4, seed=seed)
    image = tilted_qc_image_protocol(theta)
    restricted = tilted_eacc_protocol(theta)
    qc = tilted_qc_protocol(theta)
    return task, optimum, image, {
        "C": (optimum.value, optimum.distinguishability, optimum.certified),
        "QC": (
            success_metric(task, qc_correlations(qc)),
            qc_distinguishability(qc, task.priors),
            True,
        ),
        "EACC": (
            success_metric(task, eacc_correlations(image)),
            eacc_distinguishability(image, task.priors),
            True,
        ),
        "EACC_restricted": (
            success_metric(task, eacc_correlations(restricted)),
            eacc_distinguishability(restricted, task.priors),
            True,
        ),
    }


def run_tilted(theta: float, seed: int = 0) -> ExperimentRun:
    task, optimum, image, values = _tilted_values(theta, seed)
    literal = tilted_literal_protocol(theta)
    values["EACC_literal"] = (
        success_metric(task, eacc_correlations(literal)),
        eacc_distinguishability(literal, task.priors),
        True,
    )
    rows = [(r, s, d, c) for r, (s, d, c) in values.items()]
    record = _record("tilted", {"theta": theta}, seed, rows, task, optimum)
    closed = tilted_closed_form(theta)
    params = TiltedParams.from_theta(theta)
    record.values["closed_form"] = {"S": closed, "S_printed_alpha": tilted_closed_form(theta, printed=True)}
    record.notes.append(
        f"alpha={params.alpha:.6f} (printed relation {params.alpha_printed:.6f}); "
        f"closed form over classical optimum {closed / optimum.value:.6f}"
    )
    record.notes.append(
        f"Bob's omega/tau bases at mu={params.mu:.6f} give S={values['EACC_literal'][0]:.6f}; "
        f"EACC_restricted uses optimal directions"
    )
    if abs(theta - TILTED_REFERENCE["theta"]) < 1e-9:
        record.targets["C.S"] = TILTED_REFERENCE["C.S"]
        record.targets["success_ratio"] = TILTED_REFERENCE["success_ratio"]
        record.tolerance = 5e-3
    return ExperimentRun(record, _regimes(rows), image)


def run_scenario(
    n_z: int,
    search: bool = False,
    budgets: Sequence[float] = (0.36, 0.38, 0.40),
    restarts: int = 16,
    seed: int = 0,
) -> ExperimentRun:
    if n_z not in SCENARIO_SEARCH:
        raise ValueError(f"Unknown scenario (3,1,{n_z})")
    experiment = f"scenario31{n_z}"
    facets = SCENARIO_313_FACETS if n_z == 3 else SCENARIO_314_FACETS
    vertices = enumerate_vertices((3, n_z))
    rows = []
    for f in facets:
        check = verify_facet(f, vertices)
        rows.append(
            {
                "facet": f.label,
                "valid": check.valid,
                "tight_count": check.tight_count,
                "is_facet": check.is_facet,
                "max_violation": check.max_violation,
            }
        )
    record = ExperimentRecord(
        experiment=experiment,
        inputs={"search": search, "budgets": list(budgets), "restarts": restarts},
        values={
            "C": {
                "vertices": len(vertices),
                "deduplicated": vertices.deduplicated_count,
                "candidates": vertices.candidate_count,
            }
        },
        seed=seed,
    )
    record.targets["C.vertices"] = vertices.reference_count
    record.tolerance = 0.5
    record.notes.append(NPA_NOTE)

    protocol = None
    if search:
        setup = SCENARIO_SEARCH[n_z]
        cfg = SeesawConfig(restarts=restarts, rng_seed=seed)
        best = None
        for budget in budgets:
            result = seesaw_eacc(setup["facet"], cfg, d_budget=budget)
            logger.info(f"Budget {budget}: S={result.success:.4f}, D={result.distinguishability:.4f}")
            if result.ratio is not None and (best is None or result.ratio > best.ratio):
                best = result
        if best is not None:
            f = setup["facet"]
            protocol = best.protocol
            record.values["EACC"] = {"S": best.success, "D": best.distinguishability}
            record.eacc_success = best.success
            record.eacc_distinguishability = best.distinguishability
            record.classical_distinguishability = (best.success - f.rhs_constant) / f.rhs_slope
            record.minimums["distinguishability_ratio"] = setup["minimum_ratio"]
            record.notes.append(
                f"see-saw on {f.label}; reference ratio {setup['reference_ratio']}"
            )
    return ExperimentRun(
        record, pd.DataFrame(rows), protocol, {"vertices": vertices.to_frame()}
    )


def load_ensemble(path):
    """Read {"states": [...], "weights": [...], "expected": optional} from JSON."""
    with open(path) as f:
        data = json.load(f)
    states = tuple(state_from_json(s) for s in data["states"])
    weights = data.get("weights")
    ensemble = Ensemble.uniform(states) if weights is None else Ensemble(states, weights)
    return ensemble, data.get("expected")


def run_discriminate(ensemble_path: str, tol: float = None, seed: int = 0) -> ExperimentRun:
    ensemble, expected = load_ensemble(ensemble_path)
    result = discriminate(ensemble, tol=tol, strict=False)
    rows = []
    for x, (w, state, m) in enumerate(zip(ensemble.weights, ensemble.states, result.povm.elements)):
        rows.append(
            {
                "x": x + 1,
                "weight": float(w),
                "success_probability": float(np.real(np.trace(state.matrix @ m))),
            }
        )
    record = ExperimentRecord(
        experiment="discriminate",
        inputs={"ensemble": str(Path(ensemble_path)), "tol": tol},
        values={
            "ensemble": {
                "value": result.value,
                "upper_bound": result.upper_bound,
                "gap": result.gap,
            }
        },
        seed=seed,
    )
    if expected is not None:
        record.targets["ensemble.value"] = float(expected)
        record.tolerance = 1e-6
    return ExperimentRun(record, pd.DataFrame(rows))


def run_verify_appendix(which: str = "both", seed: int = 0) -> ExperimentRun:
    names = ["A", "B"] if which.lower() == "both" else [which.upper()]
    record = ExperimentRecord(experiment="verify-appendix", inputs={"which": which}, seed=seed)
    rows = []
    for name in names:
        report = evaluate_appendix(name)
        record.values[name] = {
            "S": report.success,
            "D": report.distinguishability,
            "ratio": report.ratio,
        }
        for quantity, computed, reference in (
            ("success", report.success, report.reference_success),
            ("distinguishability", report.distinguishability, report.reference_distinguishability),
            ("ratio", report.ratio, report.reference_ratio),
        ):
            rows.append(
                {
                    "which": name,
                    "quantity": quantity,
                    "computed": computed,
                    "reference": reference,
                    "deviation": computed - reference,
                }
            )
        record.targets[f"{name}.S"] = report.reference_success
        record.targets[f"{name}.D"] = report.reference_distinguishability
        record.notes.extend(f"{name}: {v}" for v in report.violations)
    return ExperimentRun(record, pd.DataFrame(rows))


def run_sweep_theta(
    points: int = None, theta_min: float = None, theta_max: float = None, seed: int = 0
) -> ExperimentRun:
    points = recording_settings["sweep_points"] if points is None else points
    theta_min = recording_settings["sweep_min"] if theta_min is None else theta_min
    theta_max = recording_settings["sweep_max"] if theta_max is None else theta_max
    if points < 1:
        raise ValueError("The sweep needs at least one point")
    rows = []
    for theta in np.linspace(theta_min, theta_max, points):
        _, _, _, values = _tilted_values(float(theta), seed)
        s_c, s_eacc = values["C"][0], values["EACC"][0]
        rows.append(
            {
                "theta": float(theta),
                "S_C": s_c,
                "S_EACC": s_eacc,
                "S_EACC_restricted": values["EACC_restricted"][0],
                "S_closed_form": tilted_closed_form(float(theta)),
                "D_EACC": values["EACC"][1],
                "advantage": bool(s_eacc > s_c),
            }
        )
        logger.debug(f"theta={theta:.4f}: S_C={s_c:.6f}, S_EACC={s_eacc:.6f}")
    frame = pd.DataFrame(rows)
    advantage = int(frame["advantage"].sum())
    record = ExperimentRecord(
        experiment="sweep-theta",
        inputs={"points": points, "min": theta_min, "max": theta_max},
        values={"sweep": {"rows": points, "advantage_rows": advantage}},
        seed=seed,
    )
    if advantage < points:
        record.notes.append(f"EACC beats the classical optimum on {advantage} of {points} rows")
    return ExperimentRun(record, frame)
