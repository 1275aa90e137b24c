import itertools

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def rand_herm(rng, d, scale=5.0):
    A = rng.uniform(-scale, scale, (d, d)) + 1j * rng.uniform(-scale, scale, (d, d))
    return (A + A.conj().T) / 2


def rand_state(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
PHASE = np.diag([1, 1j])


def phase_canonical(U):
    """Hashable key of a unitary modulo global phase."""
    flat = U.ravel()
    k = np.argmax(np.abs(flat) > 1e-9)
    V = U * (abs(flat[k]) / flat[k])
    return tuple(np.round(V.ravel(), 8).tolist())


def single_qubit_group():
    """Closure of {H, S} modulo global phase, by breadth-first products."""
    seen = {phase_canonical(np.eye(2)): np.eye(2)}
    frontier = [np.eye(2)]
    while frontier:
        nxt = []
        for U in frontier:
            for G in (HADAMARD, PHASE):
                V = G @ U
                key = phase_canonical(V)
                if key not in seen:
                    seen[key] = V
                    nxt.append(V)
        frontier = nxt
    return seen


def all_symplectic_4x4():
    """Every 4x4 binary matrix M with M Omega M^T = Omega (mod 2), by exhaustion."""
    omega = np.block([[np.zeros((2, 2), int), np.eye(2, dtype=int)], [np.eye(2, dtype=int), np.zeros((2, 2), int)]])
    out = []
    for bits in itertools.product([0, 1], repeat=16):
        m = np.array(bits).reshape(4, 4)
        if np.array_equal((m @ omega @ m.T) % 2, omega):
            out.append(m)
    return out


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (bool(ok), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
