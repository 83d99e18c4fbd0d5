import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entcomm.discrimination import Ensemble, certify, discriminate, discriminate_many, helstrom
from entcomm.errors import DimensionMismatchError
from entcomm.qcore import DensityState, PureState
from entcomm.qcore.linalg import random_density


def test_trine_value_is_two_thirds(trine):
    result = discriminate(Ensemble.uniform(trine))
    assert result.value == pytest.approx(2 / 3, abs=1e-7)
    assert result.gap < 1e-7
    assert certify(Ensemble.uniform(trine), result).certified


def test_orthogonal_states_are_perfectly_distinguishable():
    states = [PureState.basis(3, i).density() for i in range(3)]
    assert discriminate(Ensemble.uniform(states)).value == pytest.approx(1.0, abs=1e-7)


def test_identical_states_give_the_largest_weight():
    rho = DensityState.maximally_mixed(2)
    e = Ensemble((rho, rho, rho), np.array([0.2, 0.5, 0.3]))
    assert discriminate(e).value == pytest.approx(0.5, abs=1e-7)


def test_zero_weights_give_zero():
    rho = DensityState.maximally_mixed(2)
    assert discriminate(Ensemble((rho, rho), np.zeros(2))).value == 0.0


def test_single_state_returns_its_weight(rng):
    e = Ensemble((random_density(3, rng),), np.array([0.4]))
    result = discriminate(e)
    assert result.value == pytest.approx(0.4)
    assert result.gap == pytest.approx(0.0, abs=1e-12)


def test_mixed_dimensions_are_rejected(rng):
    with pytest.raises(DimensionMismatchError):
        Ensemble((random_density(2, rng), random_density(3, rng)), np.array([0.5, 0.5]))


def test_overweight_ensemble_is_rejected(rng):
    with pytest.raises(ValueError):
        Ensemble((random_density(2, rng),), np.array([1.5]))


@given(
    seed=st.integers(0, 2**32 - 1),
    dim=st.integers(2, 4),
    w0=st.floats(0.05, 0.6),
    w1=st.floats(0.05, 0.4),
)
def test_two_states_match_helstrom(seed, dim, w0, w1):
    rng = np.random.default_rng(seed)
    rho0, rho1 = random_density(dim, rng), random_density(dim, rng)
    result = discriminate(Ensemble((rho0, rho1), np.array([w0, w1])))
    assert result.value == pytest.approx(helstrom(rho0, rho1, w0, w1), abs=1e-6)


def _check_random_ensemble(seed, dim, n):
    rng = np.random.default_rng(seed)
    states = tuple(random_density(dim, rng, rank=int(rng.integers(1, dim + 1))) for _ in range(n))
    weights = rng.dirichlet(np.ones(n)) * rng.uniform(0.5, 1.0)
    e = Ensemble(states, weights)
    result = discriminate(e, tol=1e-6)
    report = certify(e, result)
    assert report.primal_feasible and report.dual_feasible
    assert report.gap < 1e-6
    assert result.value <= result.upper_bound + 1e-12


@given(seed=st.integers(0, 2**32 - 1), dim=st.integers(2, 4), n=st.integers(2, 6))
def test_random_ensembles_are_certified(seed, dim, n):
    _check_random_ensemble(seed, dim, n)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(100))
def test_hundred_ensembles_are_certified(seed):
    _check_random_ensemble(seed, 2 + seed % 3, 2 + seed % 5)


def test_batch_keeps_input_order(trine):
    ensembles = [Ensemble.uniform(trine), Ensemble.uniform(trine[:2])]
    values = [r.value for r in discriminate_many(ensembles)]
    assert values[0] == pytest.approx(2 / 3, abs=1e-7)
    assert values[1] == pytest.approx(helstrom(trine[0], trine[1], 0.5, 0.5), abs=1e-7)


def test_certify_rejects_foreign_result(trine, rng):
    result = discriminate(Ensemble.uniform(trine))
    other = Ensemble.uniform([random_density(2, rng) for _ in range(2)])
    with pytest.raises(DimensionMismatchError):
        certify(other, result)
