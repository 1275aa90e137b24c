import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wsvqe.clifford import CliffordTableau, identity_tableau, random_clifford, random_cliffords
from wsvqe.errors import DomainError
from wsvqe.shadows import (
    CliffordEnsemble,
    FidelityEstimator,
    ShadowSet,
    Snapshot,
    estimate_fidelity,
    measure_outcomes,
    take_snapshots,
)
from wsvqe.statevector import StateVector, basis_state, zero_state

from conftest import all_symplectic_4x4, rand_state, single_qubit_group


def exact_mean_term(unitaries, rho_vec, target):
    """Average of (d+1)|<b|U|t>|^2 - 1 over unitaries and Born-weighted outcomes b."""
    d = len(target)
    total = 0.0
    for U in unitaries:
        born = np.abs(U @ rho_vec) ** 2
        term = (d + 1) * np.abs(U @ target) ** 2 - 1
        total += born @ term
    return total / len(unitaries)


def test_identity_snapshots_zero_state():
    rng = np.random.default_rng(0)
    shadow = take_snapshots(lambda p: zero_state(3), None, [identity_tableau(3)] * 50, rng)
    assert all(s.outcome == 0 for s in shadow.snapshots)
    assert shadow.shots == 50


def test_snapshot_accounting():
    rng = np.random.default_rng(1)
    tabs = random_cliffords(2, 37, rng)
    assert len(take_snapshots(lambda p: basis_state(2, 3), None, tabs, rng)) == 37


def test_plus_state_binomial():
    rng = np.random.default_rng(2)
    plus = StateVector(1, np.array([1, 1]) / np.sqrt(2))
    shadow = take_snapshots(lambda p: plus, None, [identity_tableau(1)] * 10000, rng)
    frac = np.mean([s.outcome == 0 for s in shadow.snapshots])
    assert abs(frac - 0.5) <= 5 * 0.005


def test_single_term_values():
    snap = ShadowSet(3, (Snapshot(identity_tableau(3), 0),))
    assert estimate_fidelity(snap, basis_state(3, 0).amplitudes) == pytest.approx(8.0)
    assert estimate_fidelity(snap, basis_state(3, 1).amplitudes) == pytest.approx(-1.0)
    with pytest.raises(DomainError):
        estimate_fidelity(snap, basis_state(2, 0).amplitudes)


def test_shadow_validation():
    with pytest.raises(DomainError):
        ShadowSet(1, ())
    with pytest.raises(DomainError):
        ShadowSet(1, (Snapshot(identity_tableau(1), 2),))


def test_n1_exhaustive_zero_target():
    group = list(single_qubit_group().values())
    e0 = np.array([1, 0], complex)
    assert exact_mean_term(group, e0, e0) == pytest.approx(1.0, abs=1e-12)


@given(seed=st.integers(0, 2**32 - 1))
def test_n1_exhaustive_random_pairs(seed):
    rng = np.random.default_rng(seed)
    t, m = rand_state(rng, 2), rand_state(rng, 2)
    group = list(single_qubit_group().values())
    assert exact_mean_term(group, m, t) == pytest.approx(abs(np.vdot(t, m)) ** 2, abs=1e-9)


def test_n1_sampled_group_is_the_full_group():
    # the package's own 24 tableau unitaries give the same exact average
    rng = np.random.default_rng(3)
    tabs = {}
    while len(tabs) < 24:
        tab = random_clifford(1, rng)
        tabs[tab.key()] = tab
    mats = [t.unitary for t in tabs.values()]
    t, m = rand_state(rng, 2), rand_state(rng, 2)
    assert exact_mean_term(mats, m, t) == pytest.approx(abs(np.vdot(t, m)) ** 2, abs=1e-9)


@pytest.fixture(scope="module")
def all_two_qubit_unitaries():
    tabs = [
        CliffordTableau(2, m, np.array(s))
        for m in all_symplectic_4x4()
        for s in itertools.product([0, 1], repeat=4)
    ]
    assert len({t.key() for t in tabs}) == 11520
    return CliffordEnsemble(tabs).matrices


def test_n2_exhaustive_unbiased(all_two_qubit_unitaries):
    rng = np.random.default_rng(4)
    mats = all_two_qubit_unitaries
    for _ in range(5):
        t, m = rand_state(rng, 4), rand_state(rng, 4)
        born = np.abs(mats @ m) ** 2
        terms = 5 * np.abs(mats @ t) ** 2 - 1
        assert np.mean(np.sum(born * terms, axis=1)) == pytest.approx(abs(np.vdot(t, m)) ** 2, abs=1e-9)


def test_estimator_agrees_with_shadow_set():
    rng = np.random.default_rng(5)
    ens = CliffordEnsemble(random_cliffords(3, 64, rng))
    psi, target = rand_state(rng, 8), rand_state(rng, 8)
    est = FidelityEstimator(target, ens)
    a = est(psi, np.random.default_rng(6))
    shadow = take_snapshots(lambda p: StateVector(3, psi), None, ens, np.random.default_rng(6))
    assert a == pytest.approx(estimate_fidelity(shadow, target), abs=1e-12)


def test_measure_outcomes_distribution():
    rng = np.random.default_rng(7)
    ens = CliffordEnsemble([identity_tableau(2)] * 20000)
    psi = np.sqrt(np.array([0.1, 0.2, 0.3, 0.4]))
    counts = np.bincount(measure_outcomes(psi, ens, rng), minlength=4) / 20000
    np.testing.assert_allclose(counts, [0.1, 0.2, 0.3, 0.4], atol=5 * np.sqrt(0.25 / 20000))


def test_statistical_n3_small():
    rng = np.random.default_rng(8)
    ens = CliffordEnsemble(random_cliffords(3, 4000, rng))
    psi, target = rand_state(rng, 8), rand_state(rng, 8)
    est = FidelityEstimator(target, ens)(psi, rng)
    # single-snapshot variance for a pure-state projector is below 3 under random Cliffords
    assert abs(est - abs(np.vdot(target, psi)) ** 2) <= 5 * np.sqrt(3.0 / 4000)
