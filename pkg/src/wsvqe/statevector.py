"""Dense statevector simulation for a handful of qubits.

Basis index ``i`` encodes qubit ``q`` as bit ``(i >> q) & 1``, i.e. qubit 0
is the least significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DomainError

MAX_QUBITS = 10

SINGLE_QUBIT = {"RY", "RZ", "H", "S", "Sdg", "X", "Z"}
TWO_QUBIT = {"CX", "CZ"}
PARAMETRIC = {"RY", "RZ"}

_SQRT1_2 = 1.0 / np.sqrt(2.0)
_FIXED = {
    "H": np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    "S": np.array([[1, 0], [0, 1j]], dtype=complex),
    "Sdg": np.array([[1, 0], [0, -1j]], dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_INVERSE_KIND = {"S": "Sdg", "Sdg": "S"}


class Gate(NamedTuple):
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def inverse(self) -> "Gate":
        if self.kind in PARAMETRIC:
            return Gate(self.kind, self.qubits, -self.angle)
        return Gate(_INVERSE_KIND.get(self.kind, self.kind), self.qubits)


def RY(q: int, angle: float) -> Gate:
    return Gate("RY", (q,), float(angle))


def RZ(q: int, angle: float) -> Gate:
    return Gate("RZ", (q,), float(angle))


def CX(control: int, target: int) -> Gate:
    return Gate("CX", (control, target))


def CZ(a: int, b: int) -> Gate:
    return Gate("CZ", (a, b))


def gate_matrix(gate: Gate) -> np.ndarray:
    """2x2 matrix of a single-qubit gate."""
    if gate.kind == "RY":
        c, s = np.cos(gate.angle / 2), np.sin(gate.angle / 2)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if gate.kind == "RZ":
        ph = np.exp(-0.5j * gate.angle)
        return np.array([[ph, 0], [0, ph.conjugate()]], dtype=complex)
    try:
        return _FIXED[gate.kind]
    except KeyError:
        raise DomainError(f"{gate.kind} is not a single-qubit gate") from None


@dataclass
class Circuit:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            _validate_gate(g, self.n_qubits)

    def append(self, gate: Gate) -> "Circuit":
        _validate_gate(gate, self.n_qubits)
        self.gates.append(gate)
        return self

    def extend(self, gates) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def inverse(self) -> "Circuit":
        return Circuit(self.n_qubits, [g.inverse() for g in reversed(self.gates)])

    def __len__(self) -> int:
        return len(self.gates)


def _validate_gate(gate: Gate, n: int) -> None:
    if gate.kind in SINGLE_QUBIT:
        arity = 1
    elif gate.kind in TWO_QUBIT:
        arity = 2
    else:
        raise DomainError(f"unknown gate kind {gate.kind!r}")
    if len(gate.qubits) != arity:
        raise DomainError(f"{gate.kind} acts on {arity} qubit(s), got {gate.qubits}")
    if any(not 0 <= q < n for q in gate.qubits):
        raise DomainError(f"qubit index out of range in {gate} for {n} qubits")
    if arity == 2 and gate.qubits[0] == gate.qubits[1]:
        raise DomainError(f"{gate.kind} needs distinct qubits, got {gate.qubits}")
    if (gate.kind in PARAMETRIC) != (gate.angle is not None):
        raise DomainError(f"bad angle for {gate}")


class StateVector:
    """Normalized amplitudes of an ``n_qubits`` register (read-only)."""

    __slots__ = ("n_qubits", "amplitudes")

    def __init__(self, n_qubits: int, amplitudes):
        amps = np.array(amplitudes, dtype=complex)
        if amps.shape != (1 << n_qubits,):
            raise DomainError(f"need {1 << n_qubits} amplitudes, got shape {amps.shape}")
        amps.setflags(write=False)
        self.n_qubits = n_qubits
        self.amplitudes = amps

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def __repr__(self) -> str:
        return f"StateVector(n_qubits={self.n_qubits}, amplitudes={self.amplitudes!r})"


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def zero_state(n: int) -> StateVector:
    _check_n(n)
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def basis_state(n: int, index: int) -> StateVector:
    _check_n(n)
    if not 0 <= index < (1 << n):
        raise DomainError(f"basis index {index} out of range")
    amps = np.zeros(1 << n, dtype=complex)
    amps[index] = 1.0
    return StateVector(n, amps)


@lru_cache(maxsize=None)
def _split_indices(n: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    # indices with bit q clear, and their partners with bit q set
    idx = np.arange(1 << n)
    lo = idx[(idx >> q) & 1 == 0]
    lo.setflags(write=False)
    hi = lo | (1 << q)
    hi.setflags(write=False)
    return lo, hi


@lru_cache(maxsize=None)
def _cx_indices(n: int, control: int, target: int) -> tuple[np.ndarray, np.ndarray]:
    idx = np.arange(1 << n)
    a = idx[((idx >> control) & 1 == 1) & ((idx >> target) & 1 == 0)]
    b = a | (1 << target)
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


@lru_cache(maxsize=None)
def _cz_indices(n: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(1 << n)
    out = idx[((idx >> a) & 1 == 1) & ((idx >> b) & 1 == 1)]
    out.setflags(write=False)
    return out


def apply_gates(psi: np.ndarray, n: int, gates) -> np.ndarray:
    """Apply ``gates`` in order to the amplitude array ``psi`` (last axis).

    ``psi`` may carry leading batch axes. A new array is returned.
    """
    psi = np.array(psi, dtype=complex)
    for g in gates:
        kind = g.kind
        if kind == "CX":
            a, b = _cx_indices(n, g.qubits[0], g.qubits[1])
            psi[..., a], psi[..., b] = psi[..., b], psi[..., a].copy()
        elif kind == "CZ":
            psi[..., _cz_indices(n, g.qubits[0], g.qubits[1])] *= -1
        else:
            lo, hi = _split_indices(n, g.qubits[0])
            m = gate_matrix(g)
            a0 = psi[..., lo]
            a1 = psi[..., hi]
            psi[..., lo] = m[0, 0] * a0 + m[0, 1] * a1
            psi[..., hi] = m[1, 0] * a0 + m[1, 1] * a1
    return psi


def apply(state: StateVector, circuit: Circuit) -> StateVector:
    if state.n_qubits != circuit.n_qubits:
        raise DomainError(
            f"circuit on {circuit.n_qubits} qubits applied to {state.n_qubits}-qubit state"
        )
    return StateVector(state.n_qubits, apply_gates(state.amplitudes, state.n_qubits, circuit.gates))


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    """Matrix of ``circuit`` obtained by simulating every basis state."""
    d = 1 << circuit.n_qubits
    # rows of the batch are basis states, so the result is U^T
    return apply_gates(np.eye(d, dtype=complex), circuit.n_qubits, circuit.gates).T


def amplitude(state: StateVector, basis_index: int) -> complex:
    if not 0 <= basis_index < state.dim:
        raise DomainError(f"basis index {basis_index} out of range for {state.n_qubits} qubits")
    return complex(state.amplitudes[basis_index])


def sample_indices(probs: np.ndarray, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``shots`` basis indices by inverse-CDF lookup."""
    cdf = np.cumsum(probs)
    u = rng.random(shots) * cdf[-1]
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(probs) - 1)


def sample(state: StateVector, shots: int, rng: np.random.Generator) -> dict[int, int]:
    """Histogram ``{basis_index: count}`` of ``shots`` computational-basis measurements."""
    if shots < 1:
        raise DomainError("shots must be >= 1")
    counts = np.bincount(sample_indices(state.probabilities(), shots, rng), minlength=state.dim)
    return {int(i): int(c) for i, c in enumerate(counts) if c}


def fidelity_exact(state: StateVector, target) -> float:
    """``|<target|state>|^2``."""
    target = np.asarray(target, dtype=complex)
    if target.shape != state.amplitudes.shape:
        raise DomainError(f"target shape {target.shape} does not match {state.amplitudes.shape}")
    return float(min(1.0, abs(np.vdot(target, state.amplitudes)) ** 2))
