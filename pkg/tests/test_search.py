import json

import numpy as np
import pytest

from entcomm.classical import SCENARIO_313_FACETS, SCENARIO_314_FACETS, cycle_graph
from entcomm.errors import InfeasibleCapError, TargetUnreachableError
from entcomm.protocols import EaccProtocol, QcProtocol, eacc_correlations, success_metric
from entcomm.search import (
    SearchResult,
    SeesawConfig,
    evaluate_appendix,
    facet_task,
    seesaw_eacc,
    seesaw_qc,
)
from entcomm.tasks import (
    chaturvedi_task,
    cycle_target_ratio,
    cycle_target_success,
    cycle_task,
    graph_bound,
    pair_bound,
    pair_task,
    rac_task,
)
from entcomm.tasks.chaturvedi import TARGET_RATIO, TARGET_SUCCESS
from entcomm.transforms import qc_to_eacc

SMALL = SeesawConfig(restarts=2, max_rounds=8, rng_seed=7)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"restarts": 0},
            {"max_rounds": -1},
            {"convergence_eps": 0.0},
            {"n_messages": 0},
            {"dims": (2, 5)},
            {"dims": (2,)},
        ],
    )
    def test_invalid_settings(self, kwargs):
        with pytest.raises(ValueError):
            SeesawConfig(**kwargs)

    def test_defaults_come_from_settings(self):
        cfg = SeesawConfig()
        assert cfg.restarts == 64 and cfg.max_rounds == 200
        assert cfg.to_dict()["dims"] == [2, 2]


def test_facet_task_shape_and_bound():
    task = facet_task(SCENARIO_313_FACETS[0])
    assert task.coefficients.shape == (3, 1, 3)
    assert task.classical_bound(1.2) == pytest.approx(0.4)
    assert task.classical_bound(0.0) == pytest.approx(1 / 3)


class TestEaccSearch:
    def test_zero_rounds_keep_the_initial_value(self):
        result = seesaw_eacc(chaturvedi_task(), SeesawConfig(restarts=3, max_rounds=0))
        assert [len(t) for t in result.trace] == [1, 1, 1]
        assert isinstance(result.protocol, EaccProtocol)

    def test_traces_never_decrease(self):
        result = seesaw_eacc(chaturvedi_task(), SMALL)
        for trace in result.trace:
            assert np.all(np.diff(trace) >= -1e-9)
        assert result.success == pytest.approx(max(t[-1] for t in result.trace), abs=1e-7)

    def test_same_seed_same_result(self):
        first = seesaw_eacc(facet_task(SCENARIO_313_FACETS[0]), SMALL)
        second = seesaw_eacc(SCENARIO_313_FACETS[0], SMALL)
        assert first.success == pytest.approx(second.success, abs=1e-9)
        assert first.restart == second.restart

    def test_budget_is_respected(self):
        result = seesaw_eacc(SCENARIO_314_FACETS[1], SMALL, d_budget=0.38)
        assert result.distinguishability <= 0.38 + 1e-4
        assert result.d_budget == 0.38

    def test_budget_below_floor(self):
        with pytest.raises(InfeasibleCapError):
            seesaw_eacc(chaturvedi_task(), SMALL, d_budget=0.2)

    def test_unequal_dims_need_a_state(self):
        with pytest.raises(ValueError):
            seesaw_eacc(chaturvedi_task(), SeesawConfig(dims=(2, 3), restarts=1))

    def test_result_json(self):
        result = seesaw_eacc(chaturvedi_task(), SeesawConfig(restarts=1, max_rounds=1))
        data = json.loads(json.dumps(result.to_json()))
        assert data["protocol"]["kind"] == "eacc"
        assert data["config"]["restarts"] == 1
        assert isinstance(result, SearchResult)


class TestQcSearch:
    def test_returns_a_qubit_protocol(self):
        p = seesaw_qc(rac_task(2, 2), cfg=SMALL)
        assert isinstance(p, QcProtocol)
        assert p.dim == 2

    def test_unreachable_target(self):
        with pytest.raises(TargetUnreachableError) as info:
            seesaw_qc(rac_task(2, 2), target_s=0.95, cfg=SMALL)
        assert info.value.result.success < 0.95

    def test_qutrits_are_not_searched(self):
        with pytest.raises(ValueError):
            seesaw_qc(rac_task(2, 2), cfg=SeesawConfig(dims=(3, 3), restarts=1))


class TestAppendix:
    @pytest.mark.parametrize("which, n_z", [("A", 3), ("b", 4)])
    def test_report_shape(self, which, n_z):
        report = evaluate_appendix(which)
        assert report.table.shape == (3, n_z)
        assert report.distinguishability > 0
        assert report.ratio == pytest.approx(
            report.success / 3 / report.distinguishability
        )
        data = report.to_dict()
        assert data["which"] == which.upper()
        assert len(data["table"]) == 3

    def test_printed_unitary_is_flagged(self):
        report = evaluate_appendix("A")
        assert report.unitary_distance > 1e-9
        assert any(v.startswith("unitary:") for v in report.violations)

    def test_non_hermitian_effect_is_flagged(self):
        report = evaluate_appendix("B")
        assert any(v.startswith("Alice x=2: hermitian") for v in report.violations)

    def test_unknown_protocol(self):
        with pytest.raises(ValueError):
            evaluate_appendix("C")


def _qubit_search_through_eacc(task, target=None):
    """seesaw_qc, then qc_to_eacc; returns the EACC score and distinguishability."""
    qc = seesaw_qc(task, target_s=target, cfg=SeesawConfig(restarts=16))
    eacc, report = qc_to_eacc(qc, priors=task.priors)
    assert report.max_table_deviation < 1e-9
    return success_metric(task, eacc_correlations(eacc)), report.distinguishability_after


@pytest.mark.slow
class TestTargets:
    def test_rac_qubit_optimum(self):
        p = seesaw_qc(rac_task(2, 2), target_s=0.5 + 1 / (2 * np.sqrt(2)), cfg=SeesawConfig(restarts=8))
        assert p.dim == 2

    def test_chaturvedi_ratio(self):
        task = chaturvedi_task()
        s, d = _qubit_search_through_eacc(task, TARGET_SUCCESS)
        assert s >= TARGET_SUCCESS - 1e-3
        assert task.classical_bound(s) / d >= TARGET_RATIO - 1e-3

    @pytest.mark.parametrize("n", [5, 7])
    def test_odd_cycle_ratio(self, n):
        task = cycle_task(n)
        s, d = _qubit_search_through_eacc(task, cycle_target_success(n))
        assert s >= cycle_target_success(n) - 1e-3
        assert graph_bound(cycle_graph(n), s) / d >= cycle_target_ratio(n) - 1e-3

    @pytest.mark.parametrize("n", [3, 4])
    def test_pair_task_beats_the_classical_bound(self, n):
        s, d = _qubit_search_through_eacc(pair_task(n))
        assert pair_bound(n, s) > d + 1e-6

    @pytest.mark.parametrize(
        "facet, budget, min_success, min_ratio",
        [
            (SCENARIO_313_FACETS[0], 0.38, 1.21, 1.08),
            (SCENARIO_314_FACETS[1], 0.40, 1.31, 1.09),
        ],
    )
    def test_scenario_advantage(self, facet, budget, min_success, min_ratio):
        result = seesaw_eacc(facet, SeesawConfig(restarts=16), d_budget=budget)
        assert result.success >= min_success
        assert result.distinguishability <= budget + 1e-4
        assert result.ratio >= min_ratio
