import numpy as np
import pytest

from entcomm.classical import cycle_graph
from entcomm.protocols import (
    eacc_correlations,
    eacc_distinguishability,
    qc_correlations,
    qc_distinguishability,
    success_metric,
)
from entcomm.tasks import (
    Task,
    TiltedParams,
    chaturvedi_bound,
    chaturvedi_task,
    cycle_target_ratio,
    cycle_target_success,
    cycle_task,
    graph_bound,
    graph_task,
    pair_bound,
    pair_task,
    rac_bound,
    rac_eaqc_reference,
    rac_qc_protocol,
    rac_task,
    tilted_closed_form,
    tilted_eacc_protocol,
    tilted_literal_protocol,
    tilted_literal_value,
    tilted_qc_image_protocol,
    tilted_qc_protocol,
    tilted_restricted_value,
    tilted_task,
)
from entcomm.tasks.chaturvedi import TARGET_RATIO, TARGET_SUCCESS


class TestTask:
    def test_priors_must_sum_to_one(self):
        with pytest.raises(ValueError):
            Task(np.zeros((2, 1, 2)), [0.6, 0.6], "custom")

    def test_prior_count(self):
        with pytest.raises(ValueError):
            Task(np.zeros((2, 1, 2)), [1.0], "custom")

    def test_coefficients_are_finite(self):
        with pytest.raises(ValueError):
            Task(np.full((1, 1, 2), np.nan), [1.0], "custom")

    def test_json_round_trip(self):
        task = rac_task(2, 2)
        back = Task.from_json(task.to_json())
        assert np.array_equal(back.coefficients, task.coefficients)
        assert back.family == "rac" and back.params == {"n": 2, "d": 2}
        assert back.guessing_floor == pytest.approx(0.25)


class TestRac:
    @pytest.mark.parametrize("n, ratio", [(2, np.sqrt(2)), (3, 2 * (np.sqrt(3) - 1))])
    def test_qubit_protocol_advantage(self, n, ratio):
        protocol = rac_qc_protocol(n)
        s = success_metric(rac_task(n, 2), qc_correlations(protocol))
        assert s == pytest.approx(0.5 + 1 / (2 * np.sqrt(n)))
        d = qc_distinguishability(protocol)
        assert d == pytest.approx(2 / 2**n, abs=1e-6)
        assert rac_bound(n, 2, s) / d == pytest.approx(ratio, abs=1e-6)

    def test_bound_is_clipped(self):
        assert rac_bound(2, 2, 0.5) == pytest.approx(0.25)
        assert rac_bound(2, 2, 1.0) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            rac_bound(2, 2, 1.5)

    def test_eaqc_reference(self):
        ref = rac_eaqc_reference()
        assert ref["success"] == pytest.approx(0.5 + 1 / np.sqrt(6))
        assert ref["unitary_cap"] == 0.5
        assert ref["ratio"] == pytest.approx(np.sqrt(6) - 1)

    def test_coefficients_average_the_dits(self):
        task = rac_task(3, 2)
        assert task.coefficients.shape == (8, 3, 2)
        assert task.coefficients.sum() == pytest.approx(1.0)

    def test_no_stored_protocol(self):
        with pytest.raises(ValueError):
            rac_qc_protocol(4)


class TestGraph:
    def test_cycle_coefficients(self):
        task = cycle_task(5)
        assert task.coefficients.sum() == pytest.approx(1.0)
        # vertex 1 is adjacent to 2 and 5
        assert task.coefficients[1, 0, 1] > 0 and task.coefficients[4, 0, 1] > 0
        assert task.coefficients[2, 0, 1] == 0

    def test_cycle_target_ratio(self):
        assert cycle_target_ratio(5) == pytest.approx(1.01127, abs=1e-5)
        s = cycle_target_success(5)
        ratio = graph_bound(cycle_graph(5), s) / (2 / 5)
        assert ratio == pytest.approx(cycle_target_ratio(5), abs=1e-4)

    def test_bound_floor(self):
        g = cycle_graph(7)
        assert graph_bound(g, 0.0) == pytest.approx(1 / 7)

    def test_cycle_needs_three_vertices(self):
        with pytest.raises(ValueError):
            cycle_task(2)

    def test_params_record_the_edges(self):
        task = graph_task(cycle_graph(3))
        assert task.params["vertices"] == 3
        assert len(task.params["edges"]) == 3


class TestPair:
    def test_bound(self):
        assert pair_bound(3, 1.0) == pytest.approx(1.0)
        assert pair_bound(3, 0.5) == pytest.approx(1 / 3)

    def test_coefficients(self):
        task = pair_task(4)
        assert task.coefficients.shape == (4, 6, 4)
        assert task.coefficients.sum() == pytest.approx(1.0)

    def test_needs_three_inputs(self):
        with pytest.raises(ValueError):
            pair_task(2)


class TestChaturvedi:
    def test_target_ratio(self):
        ratio = chaturvedi_bound(TARGET_SUCCESS) / (2 / 3)
        assert ratio == pytest.approx((1 + np.sqrt(2)) / 2)
        assert TARGET_RATIO == pytest.approx(ratio)

    def test_five_cells(self):
        assert chaturvedi_task().coefficients.sum() == 5.0


class TestTilted:
    def test_params_at_pi_over_three(self):
        params = TiltedParams.from_theta(np.pi / 3)
        assert params.alpha == pytest.approx(0.7559, abs=1e-4)
        assert params.beta_00 + params.beta_10 == pytest.approx(1.0)
        assert params.beta_01 == params.beta_00

    def test_closed_form(self):
        assert tilted_closed_form(np.pi / 3) == pytest.approx(8 / np.sqrt(7))
        assert tilted_closed_form(np.pi / 3, printed=True) == pytest.approx(np.sqrt(10))

    @pytest.mark.parametrize("theta", [0.0, np.pi / 2, 2.0])
    def test_theta_range(self, theta):
        with pytest.raises(ValueError):
            TiltedParams.from_theta(theta)

    @pytest.mark.parametrize("theta, state", [(np.pi / 3, "psi"), (0.4, "psi"), (1.1, "phi+")])
    def test_restricted_value_matches_simulation(self, theta, state):
        task, _ = tilted_task(theta)
        p = tilted_eacc_protocol(theta, state)
        s = success_metric(task, eacc_correlations(p))
        assert s == pytest.approx(tilted_restricted_value(theta, state), abs=1e-9)

    def test_restricted_value_at_pi_over_three(self):
        assert tilted_restricted_value(np.pi / 3) == pytest.approx(2.4456, abs=1e-3)

    def test_restricted_protocol_sends_half(self):
        p = tilted_eacc_protocol(np.pi / 3, "phi+")
        assert eacc_distinguishability(p) == pytest.approx(0.5, abs=1e-6)

    def test_unknown_state(self):
        with pytest.raises(ValueError):
            tilted_eacc_protocol(np.pi / 3, "ghz")

    def test_mu_relation(self):
        params = TiltedParams.from_theta(np.pi / 3)
        assert np.cos(params.mu) == pytest.approx(1 / np.sqrt(1 + np.sin(2 * np.pi / 3) ** 2))

    @pytest.mark.parametrize("theta", [np.pi / 3, 0.4, 1.1])
    def test_literal_bases_value_matches_simulation(self, theta):
        task, _ = tilted_task(theta)
        s = success_metric(task, eacc_correlations(tilted_literal_protocol(theta)))
        assert s == pytest.approx(tilted_literal_value(theta), abs=1e-9)
        assert s <= tilted_restricted_value(theta) + 1e-9

    def test_literal_bases_at_pi_over_three(self):
        assert tilted_literal_value(np.pi / 3) == pytest.approx(-0.2024, abs=1e-3)

    def test_qc_image_protocol(self):
        theta = np.pi / 3
        task, _ = tilted_task(theta)
        qc = tilted_qc_protocol(theta)
        eacc = tilted_qc_image_protocol(theta)
        s_qc = success_metric(task, qc_correlations(qc))
        s_eacc = success_metric(task, eacc_correlations(eacc))
        assert s_qc == pytest.approx(2.8288, abs=1e-3)
        assert s_eacc == pytest.approx(s_qc, abs=1e-9)
        assert eacc_distinguishability(eacc) <= 0.5 + 1e-6
