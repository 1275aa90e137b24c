import numpy as np
import pytest
from hypothesis import given, strategies as st

from wsvqe.errors import DomainError
from wsvqe.statevector import (
    CX,
    CZ,
    RY,
    RZ,
    Circuit,
    Gate,
    StateVector,
    amplitude,
    apply,
    basis_state,
    circuit_unitary,
    fidelity_exact,
    gate_matrix,
    sample,
    zero_state,
)

from conftest import rand_state

H0 = Gate("H", (0,))


def embed(n, gate):
    """Full 2^n matrix of a gate, built from Kronecker products (qubit 0 rightmost)."""
    P0, P1 = np.diag([1, 0]), np.diag([0, 1])
    X, Z, I = np.array([[0, 1], [1, 0]]), np.diag([1, -1]), np.eye(2)

    def kron_at(ops):
        out = np.ones((1, 1), complex)
        for q in reversed(range(n)):
            out = np.kron(out, ops.get(q, I))
        return out

    if gate.kind == "CX":
        c, t = gate.qubits
        return kron_at({c: P0}) + kron_at({c: P1, t: X})
    if gate.kind == "CZ":
        a, b = gate.qubits
        return kron_at({a: P0}) + kron_at({a: P1, b: Z})
    return kron_at({gate.qubits[0]: gate_matrix(gate)})


def test_zero_state():
    np.testing.assert_array_equal(zero_state(1).amplitudes, [1, 0])
    z = zero_state(3).amplitudes
    assert z.shape == (8,) and z[0] == 1 and np.linalg.norm(z) == 1.0
    with pytest.raises(DomainError):
        zero_state(0)


def test_hadamard():
    out = apply(zero_state(1), Circuit(1, [H0]))
    np.testing.assert_allclose(out.amplitudes, [2**-0.5, 2**-0.5], atol=1e-15)
    assert amplitude(apply(zero_state(2), Circuit(2, [H0])), 1) == pytest.approx(2**-0.5)


def test_cx_endianness():
    out = apply(basis_state(2, 1), Circuit(2, [CX(0, 1)]))
    assert abs(out.amplitudes[3]) == 1.0


def test_ry_pi():
    out = apply(zero_state(1), Circuit(1, [RY(0, np.pi)]))
    assert abs(out.amplitudes[1]) == pytest.approx(1.0, abs=1e-15)


def test_out_of_range():
    with pytest.raises(DomainError):
        Circuit(2, [CX(0, 2)])
    with pytest.raises(DomainError):
        amplitude(zero_state(2), 4)
    with pytest.raises(DomainError):
        Circuit(2, [Gate("T", (0,))])


gate_st = st.one_of(
    st.builds(lambda q, a: RY(q, a), st.integers(0, 2), st.floats(-7, 7)),
    st.builds(lambda q, a: RZ(q, a), st.integers(0, 2), st.floats(-7, 7)),
    st.builds(lambda k, q: Gate(k, (q,)), st.sampled_from(["H", "S", "Sdg", "X", "Z"]), st.integers(0, 2)),
    st.builds(lambda p: CX(*p), st.permutations([0, 1, 2]).map(lambda p: p[:2])),
    st.builds(lambda p: CZ(*p), st.permutations([0, 1, 2]).map(lambda p: p[:2])),
)


@given(gates=st.lists(gate_st, max_size=12))
def test_matches_kron_oracle(gates):
    circ = Circuit(3, list(gates))
    U = np.eye(8, dtype=complex)
    for g in gates:
        U = embed(3, g) @ U
    np.testing.assert_allclose(circuit_unitary(circ), U, atol=1e-12)
    psi = apply(zero_state(3), circ).amplitudes
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
    back = apply(apply(zero_state(3), circ), circ.inverse()).amplitudes
    np.testing.assert_allclose(back, zero_state(3).amplitudes, atol=1e-12)


def test_normalization(rng):
    psi = StateVector(3, rand_state(rng, 8))
    assert sum(abs(amplitude(psi, b)) ** 2 for b in range(8)) == pytest.approx(1.0)


def test_sample_deterministic(rng):
    assert sample(zero_state(1), 100, rng) == {0: 100}


def test_sample_plus_binomial():
    plus = apply(zero_state(1), Circuit(1, [H0]))
    hist = sample(plus, 10000, np.random.default_rng(5))
    assert abs(hist.get(0, 0) / 10000 - 0.5) <= 5 * 0.5 / 100


def test_sample_reproducible():
    psi = StateVector(3, rand_state(np.random.default_rng(2), 8))
    a = sample(psi, 500, np.random.default_rng(9))
    b = sample(psi, 500, np.random.default_rng(9))
    assert a == b and sum(a.values()) == 500


def test_fidelity(rng):
    t = rand_state(rng, 8)
    assert fidelity_exact(StateVector(3, t), t) == pytest.approx(1.0)
    assert fidelity_exact(basis_state(3, 2), basis_state(3, 5).amplitudes) == 0.0
    a = rand_state(rng, 8)
    direct = abs(sum(np.conj(t[i]) * a[i] for i in range(8))) ** 2
    assert fidelity_exact(StateVector(3, a), t) == pytest.approx(direct, abs=1e-14)
    with pytest.raises(DomainError):
        fidelity_exact(StateVector(3, a), t[:4])
