import numpy as np
import pytest
from hypothesis import given, strategies as st

from wsvqe.ansatz import AnsatzSpec, build, prepare, preparer
from wsvqe.errors import DomainError


def test_parameter_and_gate_counts():
    spec = AnsatzSpec(3, 2)
    assert spec.num_parameters == 18
    kinds = [g.kind for g in build(spec, np.zeros(18)).gates]
    assert kinds.count("RY") + kinds.count("RZ") == 18
    assert kinds.count("CX") == 4
    spec0 = AnsatzSpec(3, 0)
    assert spec0.num_parameters == 6
    assert all(g.kind != "CX" for g in build(spec0, np.zeros(6)).gates)


def test_zero_parameters_give_zero_state():
    psi = prepare(AnsatzSpec(), np.zeros(18)).amplitudes
    np.testing.assert_allclose(psi, np.eye(8)[0], atol=1e-15)


def test_single_path_trace():
    # RY(pi) sets qubit 0 (index 1); block 1: CX(1,2) idle, CX(0,1) -> index 3;
    # block 2: CX(1,2) -> index 7, CX(0,1) -> index 5
    theta = np.zeros(18)
    theta[0] = np.pi
    psi = prepare(AnsatzSpec(), theta).amplitudes
    assert abs(psi[5]) == pytest.approx(1.0, abs=1e-14)


def test_layout_of_first_layer():
    theta = np.arange(18, dtype=float)
    gates = build(AnsatzSpec(), theta).gates
    assert [(g.kind, g.qubits, g.angle) for g in gates[:6]] == [
        ("RY", (0,), 0.0), ("RY", (1,), 1.0), ("RY", (2,), 2.0),
        ("RZ", (0,), 3.0), ("RZ", (1,), 4.0), ("RZ", (2,), 5.0),
    ]
    assert [(g.kind, g.qubits) for g in gates[6:8]] == [("CX", (1, 2)), ("CX", (0, 1))]


@given(theta=st.lists(st.floats(-10, 10), min_size=18, max_size=18))
def test_normalized(theta):
    assert np.linalg.norm(prepare(AnsatzSpec(), theta).amplitudes) == pytest.approx(1.0, abs=1e-10)


def test_errors_and_random_parameters():
    with pytest.raises(DomainError):
        build(AnsatzSpec(), np.zeros(17))
    with pytest.raises(DomainError):
        AnsatzSpec(0, 1)
    p = AnsatzSpec().random_parameters(np.random.default_rng(0))
    assert p.shape == (18,) and np.all(np.abs(p) <= np.pi)
    assert preparer(AnsatzSpec())(p).n_qubits == 3
