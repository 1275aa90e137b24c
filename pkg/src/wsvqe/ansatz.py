"""Hardware-efficient SU(2) ansatz: RY/RZ rotation layers with CX entanglement.

Layer ``l`` applies ``RY(theta[2nl + q])`` then ``RZ(theta[2nl + n + q])`` on
every qubit ``q``. Between rotation layers the entangling block is the
CX ladder ``CX(n-2, n-1), ..., CX(0, 1)``; the last layer has no block.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .statevector import CX, RY, RZ, Circuit, StateVector, apply_gates, zero_state


@dataclass(frozen=True)
class AnsatzSpec:
    n_qubits: int = 3
    reps: int = 2

    def __post_init__(self):
        if self.n_qubits < 1 or self.reps < 0:
            raise DomainError(f"invalid ansatz spec {self}")

    @property
    def num_parameters(self) -> int:
        return 2 * self.n_qubits * (self.reps + 1)

    def random_parameters(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(-np.pi, np.pi, self.num_parameters)


def _entangler(n: int):
    return [CX(c, c + 1) for c in range(n - 2, -1, -1)]


def build(spec: AnsatzSpec, params) -> Circuit:
    params = np.asarray(params, dtype=float)
    if params.shape != (spec.num_parameters,):
        raise DomainError(f"expected {spec.num_parameters} parameters, got shape {params.shape}")
    n = spec.n_qubits
    gates = []
    for layer in range(spec.reps + 1):
        base = 2 * n * layer
        gates.extend(RY(q, params[base + q]) for q in range(n))
        gates.extend(RZ(q, params[base + n + q]) for q in range(n))
        if layer < spec.reps:
            gates.extend(_entangler(n))
    return Circuit(n, gates)


def prepare(spec: AnsatzSpec, params) -> StateVector:
    """Ansatz state on ``|0...0>``."""
    circ = build(spec, params)
    psi = apply_gates(zero_state(spec.n_qubits).amplitudes, spec.n_qubits, circ.gates)
    return StateVector(spec.n_qubits, psi)


def preparer(spec: AnsatzSpec):
    """``params -> StateVector`` callable bound to ``spec``."""
    return lambda params: prepare(spec, params)
