import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entcomm.errors import DimensionMismatchError, ValidationError
from entcomm.qcore import DensityState, KrausChannel, Povm, PureState, phi_plus
from entcomm.qcore.linalg import (
    binary_measurement,
    random_density,
    random_projective,
    random_unitary,
)
from entcomm.protocols import (
    CorrelationTable,
    EaccProtocol,
    EaqcProtocol,
    QcProtocol,
    eacc_correlations,
    eacc_distinguishability,
    eacc_distinguishability_interval,
    eaqc_correlations,
    eaqc_distinguishability,
    load_protocol,
    protocol_from_json,
    protocol_to_json,
    qc_correlations,
    qc_distinguishability,
    reduced_post_state,
    save_protocol,
    scenario1_eacc_distinguishability,
    success_metric,
)
from entcomm.tasks import rac_qc_protocol, rac_task
from entcomm.transforms import bell_projectors, pauli


def _z_x_protocol():
    """sigma_z, flipped sigma_z, sigma_x, flipped sigma_x on phi+, message = outcome, Bob undoes the flip."""
    z = Povm.computational(2)
    x = binary_measurement([1.0, 0.0, 0.0])
    alice = (z, z.relabeled([1, 0]), x, x.relabeled([1, 0]))
    bob = ((z, z.relabeled([1, 0])),)
    return EaccProtocol(phi_plus(2), (2, 2), alice, np.tile([0, 1], (4, 1)), bob)


def _unitary_protocol(unitaries, shared=None):
    shared = phi_plus(2) if shared is None else shared
    channels = tuple(KrausChannel.unitary(u) for u in unitaries)
    return EaqcProtocol(shared, (2, 2), channels, (Povm(bell_projectors(2)),))


class TestCorrelationTable:
    def test_negative_entry(self):
        with pytest.raises(ValidationError):
            CorrelationTable([[[1.1, -0.1]]])

    def test_unnormalised_row(self):
        with pytest.raises(ValidationError):
            CorrelationTable([[[0.5, 0.4]]])

    def test_wrong_rank(self):
        with pytest.raises(ValueError):
            CorrelationTable([[0.5, 0.5]])

    def test_frame_is_one_indexed(self):
        frame = CorrelationTable(np.full((2, 1, 2), 0.5)).to_frame()
        assert frame["x"].tolist() == [1, 1, 2, 2]
        assert frame["p"].sum() == pytest.approx(2.0)


class TestPostState:
    def test_phi_plus_steers_to_transpose(self):
        effect = np.outer([1, 1j], [1, -1j]) / 2
        post = reduced_post_state(phi_plus(2).density(), effect)
        assert post.probability == pytest.approx(0.5)
        assert np.allclose(post.state.matrix, effect.T)
        assert not post.placeholder

    def test_zero_probability_branch(self):
        post = reduced_post_state(phi_plus(2).density(), np.zeros((2, 2)))
        assert post.probability == 0.0
        assert post.placeholder
        assert np.allclose(post.state.matrix, np.eye(2) / 2)

    def test_effect_of_wrong_size(self):
        with pytest.raises(DimensionMismatchError):
            reduced_post_state(phi_plus(2).density(), np.eye(3))


class TestQc:
    def test_rac_protocol_success(self):
        p = rac_qc_protocol(2)
        s = success_metric(rac_task(2, 2), qc_correlations(p))
        assert s == pytest.approx(0.5 + 1 / (2 * np.sqrt(2)))

    def test_rac_distinguishability(self):
        assert qc_distinguishability(rac_qc_protocol(2)) == pytest.approx(0.5, abs=1e-6)

    def test_mixed_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            QcProtocol((DensityState.maximally_mixed(2),), (Povm.computational(3),))

    def test_success_metric_shape_check(self):
        with pytest.raises(DimensionMismatchError):
            success_metric(rac_task(3, 2), qc_correlations(rac_qc_protocol(2)))


class TestEacc:
    def test_z_x_instance_reaches_half(self):
        p = _z_x_protocol()
        assert eacc_distinguishability(p) == pytest.approx(0.5, abs=1e-6)
        low, high = eacc_distinguishability_interval(p)
        assert low <= 0.5 + 1e-6 <= high + 1e-6

    def test_identical_measurements_reveal_nothing(self):
        z = Povm.computational(2)
        p = EaccProtocol(phi_plus(2), (2, 2), (z, z, z), np.tile([0, 1], (3, 1)), ((z, z),))
        assert eacc_distinguishability(p) == pytest.approx(1 / 3, abs=1e-6)

    def test_single_message_gives_guessing_floor(self):
        p = _z_x_protocol()
        merged = EaccProtocol(
            p.shared, p.dims, p.alice_povms, np.zeros((4, 2), dtype=int), ((Povm.computational(2),),)
        )
        assert eacc_distinguishability(merged) == pytest.approx(0.25, abs=1e-6)

    def test_table_rows_are_normalised(self):
        table = eacc_correlations(_z_x_protocol())
        assert np.allclose(table.probs.sum(axis=2), 1.0)
        assert table.probs[0, 0, 0] == pytest.approx(1.0)
        # the flipped measurement decodes to the other outcome
        assert table.probs[1, 0, 1] == pytest.approx(1.0)

    def test_message_function_shape(self):
        z = Povm.computational(2)
        with pytest.raises(ValueError):
            EaccProtocol(phi_plus(2), (2, 2), (z,), [[0, 1, 0]], ((z, z),))

    def test_message_without_bob_povm(self):
        z = Povm.computational(2)
        with pytest.raises(ValueError):
            EaccProtocol(phi_plus(2), (2, 2), (z,), [[0, 2]], ((z, z),))

    def test_unknown_shared_state_takes_the_worst_candidate(self):
        candidates = [DensityState.maximally_mixed(4), phi_plus(2).density()]
        value, index = scenario1_eacc_distinguishability(_z_x_protocol(), candidates)
        assert index == 1
        assert value == pytest.approx(0.5, abs=1e-6)

    def test_scenario1_needs_candidates(self):
        with pytest.raises(ValueError):
            scenario1_eacc_distinguishability(_z_x_protocol(), [])


def _check_rank_one_measurements(seed):
    rng = np.random.default_rng(seed)
    alice = tuple(random_projective(2, rng) for _ in range(4))
    z = Povm.computational(2)
    p = EaccProtocol(phi_plus(2), (2, 2), alice, np.tile([0, 1], (4, 1)), ((z, z),))
    assert eacc_distinguishability(p) <= 0.5 + 1e-6


def _check_eight_unitaries(seed):
    rng = np.random.default_rng(seed)
    p = _unitary_protocol(
        [random_unitary(2, rng) for _ in range(8)], shared=random_density(4, rng)
    )
    assert eaqc_distinguishability(p) <= 0.5 + 1e-6


@given(seed=st.integers(0, 2**32 - 1))
def test_rank_one_qubit_measurements_stay_below_half(seed):
    _check_rank_one_measurements(seed)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_two_hundred_rank_one_instances(seed):
    _check_rank_one_measurements(seed)


class TestEaqc:
    def test_pauli_unitaries_are_perfectly_distinguishable(self):
        p = _unitary_protocol([pauli(m, 2) for m in range(4)])
        assert eaqc_distinguishability(p) == pytest.approx(1.0, abs=1e-6)
        table = eaqc_correlations(p)
        assert np.allclose(np.diag(table.probs[:, 0, :]), 1.0)

    @given(seed=st.integers(0, 2**32 - 1))
    def test_eight_unitaries_stay_below_half(self, seed):
        _check_eight_unitaries(seed)

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(200))
    def test_two_hundred_unitary_instances(self, seed):
        _check_eight_unitaries(seed)

    def test_channel_input_dim(self):
        with pytest.raises(DimensionMismatchError):
            _unitary_protocol([np.eye(3)])


class TestSerialization:
    def test_eacc_json_round_trip(self):
        p = _z_x_protocol()
        back = protocol_from_json(protocol_to_json(p))
        assert isinstance(back, EaccProtocol)
        assert eacc_correlations(back).max_deviation(eacc_correlations(p)) < 1e-12
        assert np.array_equal(back.message_fn, p.message_fn)

    def test_qc_file_round_trip(self, tmp_path):
        p = rac_qc_protocol(3)
        save_protocol(p, tmp_path / "nested" / "p.json")
        back = load_protocol(tmp_path / "nested" / "p.json")
        assert qc_correlations(back).max_deviation(qc_correlations(p)) < 1e-12

    def test_eaqc_json_round_trip(self):
        p = _unitary_protocol([pauli(m, 2) for m in range(4)])
        back = protocol_from_json(protocol_to_json(p))
        assert back.out_dim == 2

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            protocol_from_json({"kind": "telepathy"})

    def test_unsupported_object(self):
        with pytest.raises(TypeError):
            protocol_to_json(PureState.basis(2, 0))
