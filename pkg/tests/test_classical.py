import networkx as nx
import numpy as np
import pytest

from entcomm.classical import (
    SCENARIO_313_FACETS,
    SCENARIO_314_FACETS,
    Decoding,
    Encoding,
    classical_facet_value,
    classical_optimum,
    cycle_graph,
    encoding_distinguishability,
    enumerate_vertices,
    facets_from_vertices,
    independence_number,
    load_graph,
    parse_facet,
    shift_encoding_demo,
    simulate,
    verify_facet,
)
from entcomm.errors import InfeasibleCapError, ScenarioTooLargeError
from entcomm.tasks import rac_task, tilted_task


class TestStrategies:
    def test_identity_encoding_reveals_input(self):
        e = Encoding(np.eye(4))
        assert encoding_distinguishability(e, np.full(4, 0.25)) == pytest.approx(1.0)

    def test_constant_encoding_gives_guessing_floor(self):
        e = Encoding.deterministic([0, 0, 0], 2)
        assert encoding_distinguishability(e, [0.5, 0.3, 0.2]) == pytest.approx(0.5)

    def test_rows_must_be_stochastic(self):
        with pytest.raises(ValueError):
            Encoding([[0.5, 0.4]])

    def test_simulate_composes_encoding_and_decoding(self):
        e = Encoding.deterministic([0, 1], 2)
        d = Decoding.deterministic([[0, 1], [1, 1]], 2)
        p = simulate(e, d)
        assert p.shape == (2, 2, 2)
        assert p[0, 1, 1] == 1.0 and p[1, 0, 1] == 1.0

    def test_message_count_mismatch(self):
        with pytest.raises(ValueError):
            simulate(Encoding(np.eye(3)), Decoding.deterministic([[0], [1]], 2))

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_shift_encoding_demo(self, n):
        assert shift_encoding_demo(n) == (1 / n, 1.0)


class TestGraphs:
    @pytest.mark.parametrize("n, alpha", [(3, 1), (5, 2), (7, 3), (9, 4)])
    def test_cycle_independence_number(self, n, alpha):
        assert independence_number(cycle_graph(n)) == alpha

    def test_edge_iterable_input(self):
        assert independence_number([(1, 2), (2, 3), (3, 4)]) == 2

    def test_complete_graph(self):
        assert independence_number(nx.complete_graph(6)) == 1

    def test_too_many_vertices(self):
        with pytest.raises(ScenarioTooLargeError):
            independence_number(nx.empty_graph(30))

    def test_load_graph_with_header(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("# n=5\n1 2\n\n2 3\n")
        g = load_graph(path)
        assert g.number_of_nodes() == 5
        assert independence_number(g) == 4

    def test_load_graph_rejects_self_loop(self, tmp_path):
        path = tmp_path / "g.txt"
        path.write_text("1 1\n")
        with pytest.raises(ValueError):
            load_graph(path)


class TestFacets:
    def test_parse_facet_coefficients(self):
        f = parse_facet("p(2|1)+p(1|3)+p(3|1) <= 3D", 3, 3)
        expected = np.zeros((3, 3))
        expected[0, 1] = expected[2, 0] = expected[0, 2] = 1.0
        assert np.array_equal(f.coefficients, expected)
        assert f.rhs_slope == 3.0 and f.rhs_constant == 0.0

    def test_parse_latex_form(self):
        f = parse_facet(r"2p(1|2) - p(2|1) \leqslant 2\mathcal{D} + 1")
        assert f.scenario == (2, 2)
        assert f.coefficients[1, 0] == 2.0 and f.coefficients[0, 1] == -1.0
        assert f.bound(0.5) == pytest.approx(2.0)

    @pytest.mark.parametrize("text", ["p(1|1)", "p(1|1) <= q", "<= 3D"])
    def test_parse_errors(self, text):
        with pytest.raises(ValueError):
            parse_facet(text)

    def test_classical_facet_value(self):
        assert classical_facet_value(SCENARIO_313_FACETS[0], 0.4) == pytest.approx(1.2)

    def test_listed_facets(self):
        assert len(SCENARIO_313_FACETS) == 2 and len(SCENARIO_314_FACETS) == 3
        assert all(f.scenario == (3, 4) for f in SCENARIO_314_FACETS)


class TestOptimum:
    def test_rac_22_at_half(self):
        opt = classical_optimum(rac_task(2, 2), d_cap=0.5)
        assert opt.certified
        assert opt.value == pytest.approx(0.75, abs=1e-7)
        assert opt.distinguishability <= 0.5 + 1e-9

    def test_rac_32_at_quarter(self):
        opt = classical_optimum(rac_task(3, 2), d_cap=0.25)
        # two effective messages, majority vote
        assert opt.value == pytest.approx(0.75, abs=1e-7)

    def test_full_cap_solves_the_task(self):
        opt = classical_optimum(rac_task(2, 2), d_cap=1.0)
        assert opt.value == pytest.approx(1.0, abs=1e-7)

    def test_tilted_at_pi_over_three(self):
        task, _ = tilted_task(np.pi / 3)
        opt = classical_optimum(task, d_cap=0.5, n_messages=4)
        assert opt.certified
        assert opt.value == pytest.approx(2.7559, abs=5e-3)

    def test_cap_below_floor(self):
        with pytest.raises(InfeasibleCapError):
            classical_optimum(rac_task(2, 2), d_cap=0.2)


class TestVertices:
    def test_small_scenario_vertices(self):
        vs = enumerate_vertices((2, 2))
        assert len(vs) > 0
        for v in vs:
            assert np.allclose(v.simulated_probs(), v.probs)
            assert 0.5 - 1e-9 <= v.distinguishability <= 1.0 + 1e-9
        frame = vs.to_frame()
        assert list(frame.columns) == ["p(1|1)", "p(2|1)", "p(1|2)", "p(2|2)", "D"]

    def test_hull_inequalities_hold_on_every_vertex(self):
        vs = enumerate_vertices((2, 2))
        facets = facets_from_vertices(vs)
        assert facets
        for f in facets:
            check = verify_facet(f, vs)
            assert check.valid
            assert check.is_facet

    def test_decoder_guard(self):
        with pytest.raises(ScenarioTooLargeError):
            enumerate_vertices((3, 200))

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "scenario, facets, candidates, deduplicated, reference",
        [
            ((3, 3), SCENARIO_313_FACETS, 1620, 72, 10368),
            ((3, 4), SCENARIO_314_FACETS, 3840, 164, 32768),
        ],
    )
    def test_listed_facets_on_enumerated_vertices(
        self, caplog, scenario, facets, candidates, deduplicated, reference
    ):
        with caplog.at_level("WARNING", logger="entcomm"):
            vs = enumerate_vertices(scenario)
        assert vs.candidate_count == candidates
        assert vs.deduplicated_count == deduplicated
        assert 0 < len(vs) <= deduplicated
        # both counts are reported when they disagree
        assert vs.reference_count == reference
        assert f"{len(vs)} vertices, reference count {reference}" in caplog.text
        for f in facets:
            check = verify_facet(f, vs)
            assert check.valid
            assert check.is_facet
