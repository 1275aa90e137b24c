import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import chisquare

from wsvqe.clifford import (
    CliffordTableau,
    identity_tableau,
    is_symplectic,
    random_clifford,
    random_cliffords,
    stack_unitaries,
    synthesize,
    tableau_from_circuit,
)
from wsvqe.errors import DomainError
from wsvqe.pauli import pauli_matrix
from wsvqe.statevector import Circuit, Gate, basis_state, circuit_unitary

from conftest import HADAMARD, all_symplectic_4x4, phase_canonical, rand_state, single_qubit_group

def group_order(n):
    return 2 ** (n * n + 2 * n) * np.prod([4**j - 1 for j in range(1, n + 1)])


def conjugation_ok(tab):
    U = tab.unitary
    n = tab.n
    for g in range(2 * n):
        gen = "".join(("X" if g < n else "Z") if q == g % n else "I" for q in range(n))
        sign, image = tab.image(g)
        expected = (-1) ** sign * pauli_matrix(image)
        if not np.allclose(U @ pauli_matrix(gen) @ U.conj().T, expected, atol=1e-10):
            return False
    return True


def test_group_orders():
    assert len(single_qubit_group()) == 24 == group_order(1)
    assert group_order(2) == 11520


def test_n1_uniform():
    classes = single_qubit_group()
    index = {k: i for i, k in enumerate(classes)}
    rng = np.random.default_rng(17)
    counts = np.zeros(24)
    for _ in range(24000):
        counts[index[phase_canonical(random_clifford(1, rng).unitary)]] += 1
    assert (counts > 0).all()
    assert chisquare(counts).pvalue >= 1e-3


def test_n2_distinct_count():
    # occupancy oracle: E[distinct] = N (1 - (1 - 1/N)^m) for uniform draws
    rng = np.random.default_rng(23)
    m, N = 20000, group_order(2)
    distinct = len({random_clifford(2, rng).key() for _ in range(m)})
    expected = N * (1 - (1 - 1 / N) ** m)
    assert abs(distinct - expected) <= 5 * np.sqrt(expected * (1 - expected / N))


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 4))
def test_sampled_symplectic_and_roundtrip(seed, n):
    tab = random_clifford(n, np.random.default_rng(seed))
    assert tab.is_symplectic()
    assert tableau_from_circuit(synthesize(tab)) == tab


@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 3))
def test_synthesized_unitary_conjugates(seed, n):
    assert conjugation_ok(random_clifford(n, np.random.default_rng(seed)))


def test_conjugation_many_n3():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        tab = random_clifford(3, rng)
        assert tableau_from_circuit(tab.circuit) == tab
    phi, psi = rand_state(rng, 8), rand_state(rng, 8)
    for tab in random_cliffords(3, 100, rng):
        U = tab.unitary
        assert abs(abs(np.vdot(U @ phi, U @ psi)) - abs(np.vdot(phi, psi))) <= 1e-9
    assert all(conjugation_ok(t) for t in random_cliffords(3, 50, rng))


def test_identity_synthesis():
    assert len(synthesize(identity_tableau(3))) == 0


def test_hadamard_synthesis():
    tab = tableau_from_circuit(Circuit(1, [Gate("H", (0,))]))
    U = circuit_unitary(synthesize(tab))
    for b in range(2):
        out = U @ basis_state(1, b).amplitudes
        assert abs(np.vdot(HADAMARD[:, b], out)) == pytest.approx(1.0, abs=1e-12)


@given(gates=st.lists(st.one_of(
    st.builds(lambda k, q: Gate(k, (q,)), st.sampled_from(["H", "S", "Sdg", "X", "Z"]), st.integers(0, 2)),
    st.builds(lambda k, p: Gate(k, tuple(p[:2])), st.sampled_from(["CX", "CZ"]), st.permutations([0, 1, 2])),
), max_size=15))
def test_circuit_tableau_matches_matrices(gates):
    circ = Circuit(3, list(gates))
    tab = tableau_from_circuit(circ)
    U = circuit_unitary(circ)
    for g in range(6):
        gen = "".join(("X" if g < 3 else "Z") if q == g % 3 else "I" for q in range(3))
        sign, image = tab.image(g)
        np.testing.assert_allclose(U @ pauli_matrix(gen) @ U.conj().T, (-1) ** sign * pauli_matrix(image), atol=1e-12)


def test_non_symplectic_rejected():
    bad = CliffordTableau(1, np.array([[1, 0], [1, 0]]), np.zeros(2))
    assert not is_symplectic(bad.table)
    with pytest.raises(DomainError):
        synthesize(bad)
    with pytest.raises(DomainError):
        random_clifford(0, np.random.default_rng(0))


def test_tableau_equality_and_stack():
    rng = np.random.default_rng(2)
    a = random_clifford(2, rng)
    b = CliffordTableau(2, a.table.copy(), a.signs.copy())
    assert a == b and hash(a) == hash(b)
    mats = stack_unitaries([a, b])
    assert mats.shape == (2, 4, 4)
    np.testing.assert_allclose(mats[0] @ mats[0].conj().T, np.eye(4), atol=1e-12)


def test_exhaustive_n2_symplectic_count():
    mats = all_symplectic_4x4()
    assert len(mats) * 16 == group_order(2)
    assert all(is_symplectic(m) for m in mats)
