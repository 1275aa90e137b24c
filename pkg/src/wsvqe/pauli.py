"""Pauli decomposition, qubit-wise commuting grouping and shot-based expectation.

Pauli strings are plain ``str`` values over ``"IXYZ"`` where character ``q``
is the letter acting on qubit ``q`` (qubit 0 first, least significant bit).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .numerics import check_hermitian
from .statevector import Circuit, Gate, StateVector, apply_gates, sample_indices

PRUNE_TOL = 1e-12

_LETTERS = "IXYZ"
_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliTerm:
    string: str
    coefficient: float

    @property
    def n_qubits(self) -> int:
        return len(self.string)

    @property
    def is_identity(self) -> bool:
        return set(self.string) <= {"I"}


@dataclass(frozen=True)
class MeasurementGroup:
    terms: tuple[PauliTerm, ...]
    basis: str

    @property
    def has_measured_terms(self) -> bool:
        return any(not t.is_identity for t in self.terms)


def pauli_matrix(string: str) -> np.ndarray:
    """Dense matrix of a Pauli string; qubit 0 is the rightmost Kronecker factor."""
    out = np.ones((1, 1), dtype=complex)
    for letter in reversed(string):
        out = np.kron(out, _SINGLE[letter])
    return out


@lru_cache(maxsize=None)
def _all_strings(n: int) -> tuple[tuple[str, ...], np.ndarray]:
    strings = tuple("".join(p) for p in itertools.product(_LETTERS, repeat=n))
    mats = np.stack([pauli_matrix(s) for s in strings])
    mats.setflags(write=False)
    return strings, mats


def n_qubits_for(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or (1 << n) != dim:
        raise DomainError(f"dimension {dim} is not a power of two >= 2")
    return n


def decompose(H, prune: float = PRUNE_TOL) -> list[PauliTerm]:
    """Coefficients ``x_i = Tr(P_i H) / 2^n`` of the Pauli expansion of ``H``.

    Terms with ``|x_i| <= prune`` are dropped. Order is lexicographic in
    ``I < X < Y < Z`` reading qubit 0 first.
    """
    H = check_hermitian(H)
    n = n_qubits_for(H.shape[0])
    strings, mats = _all_strings(n)
    # Tr(P H) = sum_ij P_ij H_ji
    coeffs = np.einsum("kij,ji->k", mats, H).real / H.shape[0]
    return [PauliTerm(s, float(c)) for s, c in zip(strings, coeffs) if abs(c) > prune]


def reconstruct(terms: Sequence[PauliTerm]) -> np.ndarray:
    if not terms:
        raise DomainError("cannot reconstruct from an empty term list")
    return sum(t.coefficient * pauli_matrix(t.string) for t in terms)


def qubitwise_commute(a: str, b: str) -> bool:
    return all(x == "I" or y == "I" or x == y for x, y in zip(a, b))


def group_qwc(terms: Sequence[PauliTerm]) -> list[MeasurementGroup]:
    """Greedy first-fit grouping into qubit-wise commuting sets.

    Identity positions of a group's basis are filled with ``Z``.
    """
    if not terms:
        return []
    n = terms[0].n_qubits
    if any(t.n_qubits != n for t in terms):
        raise DomainError("all Pauli strings must have the same length")
    members: list[list[PauliTerm]] = []
    bases: list[list[str]] = []
    for term in terms:
        for group, basis in zip(members, bases):
            if all(b == "I" or s == "I" or b == s for b, s in zip(basis, term.string)):
                group.append(term)
                for q, s in enumerate(term.string):
                    if s != "I":
                        basis[q] = s
                break
        else:
            members.append([term])
            bases.append(list(term.string))
    return [
        MeasurementGroup(tuple(g), "".join("Z" if b == "I" else b for b in basis))
        for g, basis in zip(members, bases)
    ]


def basis_rotation_circuit(group: MeasurementGroup) -> Circuit:
    """Rotate the group's measurement basis onto the computational basis."""
    circ = Circuit(len(group.basis))
    for q, letter in enumerate(group.basis):
        if letter == "X":
            circ.append(Gate("H", (q,)))
        elif letter == "Y":
            circ.append(Gate("Sdg", (q,)))
            circ.append(Gate("H", (q,)))
    return circ


def parity_signs(string: str) -> np.ndarray:
    """``(-1)^(parity of bits at non-identity positions)`` for every basis index."""
    n = len(string)
    mask = sum(1 << q for q, s in enumerate(string) if s != "I")
    idx = np.arange(1 << n)
    bits = np.array([bin(i & mask).count("1") for i in idx])
    return 1.0 - 2.0 * (bits & 1)


class QEEPlan:
    """Precomputed measurement plan for repeated expectation estimation of one ``H``."""

    def __init__(self, terms: Sequence[PauliTerm], groups: Sequence[MeasurementGroup] | None = None):
        if not terms:
            raise DomainError("empty term list")
        self.terms = list(terms)
        self.n_qubits = self.terms[0].n_qubits
        self.groups = list(groups) if groups is not None else group_qwc(self.terms)
        self.offset = sum(t.coefficient for t in self.terms if t.is_identity)
        self._measured = []
        for g in self.groups:
            measured = [t for t in g.terms if not t.is_identity]
            if not measured:
                continue
            # weighted sign table: observable value of each outcome
            weights = sum(t.coefficient * parity_signs(t.string) for t in measured)
            self._measured.append((basis_rotation_circuit(g).gates, weights))

    @cached_property
    def circuits_per_evaluation(self) -> int:
        return len(self._measured)

    def estimate(self, psi: np.ndarray, shots: int, rng: np.random.Generator) -> float:
        value = self.offset
        for gates, weights in self._measured:
            rotated = apply_gates(psi, self.n_qubits, gates) if gates else psi
            idx = sample_indices(np.abs(rotated) ** 2, shots, rng)
            value += float(weights[idx].mean())
        return value

    def variance(self, psi: np.ndarray, shots: int) -> float:
        """Exact variance of :meth:`estimate` for the state ``psi``."""
        var = 0.0
        for gates, weights in self._measured:
            p = np.abs(apply_gates(psi, self.n_qubits, gates)) ** 2
            mean = p @ weights
            var += (p @ weights**2 - mean**2) / shots
        return float(var)


def estimate_expectation(
    prepare: Callable[[np.ndarray], StateVector],
    params,
    terms: Sequence[PauliTerm] | QEEPlan,
    shots_per_circuit: int,
    rng: np.random.Generator,
) -> tuple[float, int, int]:
    """Shot-based estimate of ``sum_i x_i <P_i>``.

    Returns ``(value, circuits_used, total_shots)``. Identity terms
    contribute their coefficient without measurement.
    """
    if shots_per_circuit < 1:
        raise DomainError("shots_per_circuit must be >= 1")
    plan = terms if isinstance(terms, QEEPlan) else QEEPlan(terms)
    state = prepare(params)
    value = plan.estimate(state.amplitudes, shots_per_circuit, rng)
    circuits = plan.circuits_per_evaluation
    return value, circuits, circuits * shots_per_circuit


def exact_expectation(state: StateVector, H) -> float:
    H = np.asarray(H, dtype=complex)
    if H.shape != (state.dim, state.dim):
        raise DomainError(f"operator shape {H.shape} does not match {state.n_qubits} qubits")
    a = state.amplitudes
    return float(np.vdot(a, H @ a).real)
