"""Uniformly random Clifford elements as binary tableaus, and their synthesis.

A tableau stores, for each generator ``g`` in ``X_0..X_{n-1}, Z_0..Z_{n-1}``,
the Pauli ``U g U^dagger = (-1)^r P(x, z)`` where ``P(x, z)`` is the
Hermitian Pauli with ``X`` part ``x`` and ``Z`` part ``z`` (``Y`` when both
bits are set). Global phase is not represented.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError
from .statevector import Circuit, Gate, circuit_unitary

MAX_QUBITS = 6

CLIFFORD_GATES = {"H", "S", "Sdg", "X", "Z", "CX", "CZ"}


@dataclass(frozen=True, eq=False)
class CliffordTableau:
    """Row ``g`` of ``table`` is ``[x_0..x_{n-1}, z_0..z_{n-1}]`` of the image of generator ``g``."""

    n: int
    table: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.uint8) & 1
        signs = np.asarray(self.signs, dtype=np.uint8) & 1
        if table.shape != (2 * self.n, 2 * self.n) or signs.shape != (2 * self.n,):
            raise DomainError(f"bad tableau shapes {table.shape}, {signs.shape} for n={self.n}")
        table.setflags(write=False)
        signs.setflags(write=False)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "signs", signs)

    @property
    def symplectic_matrix(self) -> np.ndarray:
        """Columns are the images of ``X_q`` then ``Z_q`` as ``(x | z)`` bit vectors."""
        return self.table.T

    def image(self, g: int) -> tuple[int, str]:
        """``(sign_bit, pauli_string)`` image of generator ``g`` (qubit 0 first)."""
        x, z = self.table[g, : self.n], self.table[g, self.n :]
        letters = "".join("IXZY"[int(a) + 2 * int(b)] for a, b in zip(x, z))
        return int(self.signs[g]), letters

    def key(self) -> bytes:
        """Canonical hashable form; equal keys mean equal Clifford up to phase."""
        return bytes([self.n]) + np.packbits(np.concatenate([self.table.ravel(), self.signs])).tobytes()

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordTableau) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def is_symplectic(self) -> bool:
        return is_symplectic(self.table)

    @cached_property
    def circuit(self) -> Circuit:
        return synthesize(self)

    @cached_property
    def unitary(self) -> np.ndarray:
        """Matrix of the synthesized circuit (fixed, arbitrary global phase)."""
        return circuit_unitary(self.circuit)


def symplectic_form(n: int) -> np.ndarray:
    omega = np.zeros((2 * n, 2 * n), dtype=np.int64)
    omega[:n, n:] = np.eye(n, dtype=np.int64)
    omega[n:, :n] = np.eye(n, dtype=np.int64)
    return omega


def is_symplectic(table: np.ndarray) -> bool:
    table = np.asarray(table, dtype=np.int64)
    n = table.shape[0] // 2
    omega = symplectic_form(n)
    return bool(np.array_equal((table @ omega @ table.T) % 2, omega))


def identity_tableau(n: int) -> CliffordTableau:
    return CliffordTableau(n, np.eye(2 * n, dtype=np.uint8), np.zeros(2 * n, dtype=np.uint8))


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_QUBITS:
        raise DomainError(f"qubit count must be in [1, {MAX_QUBITS}], got {n}")


def _sym_inner(a: int, b: int, n: int) -> int:
    mask = (1 << n) - 1
    ax, az = a & mask, a >> n
    bx, bz = b & mask, b >> n
    return ((ax & bz) ^ (az & bx)).bit_count() & 1


def random_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniformly random ``2n x 2n`` symplectic matrix over GF(2), as tableau rows.

    Builds a symplectic basis pair by pair. Image of ``X_k`` is uniform over
    nonzero vectors orthogonal to all earlier pairs; image of ``Z_k`` is
    uniform over vectors orthogonal to earlier pairs with inner product 1
    against the image of ``X_k``. The number of choices at every step does
    not depend on earlier choices, so every symplectic basis, and hence
    every symplectic matrix, is equally likely. Each set is sampled by
    rejection from uniform ``2n``-bit vectors.
    """
    _check_n(n)
    size = 1 << (2 * n)
    chosen: list[int] = []
    xs: list[int] = []
    zs: list[int] = []
    for _ in range(n):
        while True:
            v = int(rng.integers(1, size))
            if all(_sym_inner(v, c, n) == 0 for c in chosen):
                break
        while True:
            w = int(rng.integers(1, size))
            if _sym_inner(v, w, n) == 1 and all(_sym_inner(w, c, n) == 0 for c in chosen):
                break
        chosen.extend((v, w))
        xs.append(v)
        zs.append(w)
    rows = xs + zs
    bits = np.array([[(r >> j) & 1 for j in range(2 * n)] for r in rows], dtype=np.uint8)
    return bits


def random_clifford(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Clifford element drawn uniformly from the ``n``-qubit group modulo phase."""
    table = random_symplectic(n, rng)
    signs = rng.integers(0, 2, size=2 * n).astype(np.uint8)
    return CliffordTableau(n, table, signs)


def _conjugate(x: np.ndarray, z: np.ndarray, r: np.ndarray, gate: Gate) -> None:
    """In place: replace every row ``P`` by ``G P G^dagger``."""
    kind, qs = gate.kind, gate.qubits
    if kind == "H":
        (a,) = qs
        r ^= x[:, a] & z[:, a]
        x[:, a], z[:, a] = z[:, a].copy(), x[:, a].copy()
    elif kind == "S":
        (a,) = qs
        r ^= x[:, a] & z[:, a]
        z[:, a] ^= x[:, a]
    elif kind == "Sdg":
        (a,) = qs
        r ^= x[:, a] & (z[:, a] ^ 1)
        z[:, a] ^= x[:, a]
    elif kind == "X":
        r ^= z[:, qs[0]]
    elif kind == "Z":
        r ^= x[:, qs[0]]
    elif kind == "CX":
        c, t = qs
        r ^= x[:, c] & z[:, t] & (x[:, t] ^ z[:, c] ^ 1)
        x[:, t] ^= x[:, c]
        z[:, c] ^= z[:, t]
    elif kind == "CZ":
        for g in (Gate("H", (qs[1],)), Gate("CX", qs), Gate("H", (qs[1],))):
            _conjugate(x, z, r, g)
    else:
        raise DomainError(f"{kind} is not a Clifford gate")


def tableau_from_circuit(circuit: Circuit) -> CliffordTableau:
    """Tableau of the Clifford implemented by ``circuit`` (gates in time order)."""
    n = circuit.n_qubits
    x = np.zeros((2 * n, n), dtype=np.uint8)
    z = np.zeros((2 * n, n), dtype=np.uint8)
    x[:n] = np.eye(n, dtype=np.uint8)
    z[n:] = np.eye(n, dtype=np.uint8)
    r = np.zeros(2 * n, dtype=np.uint8)
    for g in circuit.gates:
        _conjugate(x, z, r, g)
    return CliffordTableau(n, np.hstack([x, z]), r)


_INVERSE = {"H": "H", "S": "Sdg", "Sdg": "S", "X": "X", "Z": "Z", "CX": "CX"}


def synthesize(tab: CliffordTableau) -> Circuit:
    """Circuit over ``{H, S, Sdg, CX, X, Z}`` implementing ``tab`` up to global phase.

    Gates ``G_1..G_m`` are chosen so that conjugating the tableau rows by them
    yields the identity tableau; the returned circuit is their inverses in
    reverse order.
    """
    if not tab.is_symplectic():
        raise DomainError("tableau is not symplectic")
    n = tab.n
    x = tab.table[:, :n].copy()
    z = tab.table[:, n:].copy()
    r = tab.signs.copy()
    reducing: list[Gate] = []

    def emit(kind: str, *qs: int) -> None:
        g = Gate(kind, qs)
        _conjugate(x, z, r, g)
        reducing.append(g)

    for q in range(n):
        xr = q  # row holding the image of X_q
        # give the X image an X component on some qubit >= q
        if not x[xr, q:].any():
            k = q + int(np.flatnonzero(z[xr, q:])[0])
            emit("H", k)
        if not x[xr, q]:
            k = q + int(np.flatnonzero(x[xr, q:])[0])
            emit("CX", q, k)
            emit("CX", k, q)
            emit("CX", q, k)
        for k in range(q + 1, n):
            if x[xr, k]:
                emit("CX", q, k)
        if z[xr, q]:
            emit("S", q)
        for k in range(q + 1, n):
            if z[xr, k]:
                # CZ(q, k) strips Z_k from X_q Z_k
                emit("H", k)
                emit("CX", q, k)
                emit("H", k)
        zr = n + q  # row holding the image of Z_q
        for k in range(q + 1, n):
            if x[zr, k]:
                if z[zr, k]:
                    emit("S", k)
                emit("H", k)
        for k in range(q + 1, n):
            if z[zr, k]:
                emit("CX", k, q)
        if x[zr, q]:
            # sqrt(X) = H S H fixes X and maps Y to Z
            emit("H", q)
            emit("S", q)
            emit("H", q)
    for q in range(n):
        if r[q]:
            emit("Z", q)
        if r[n + q]:
            emit("X", q)

    if not (np.array_equal(x, np.eye(2 * n, n, dtype=np.uint8))
            and np.array_equal(z, np.eye(2 * n, n, k=-n, dtype=np.uint8))):
        raise AssertionError("tableau reduction did not reach the identity")
    return Circuit(n, [Gate(_INVERSE[g.kind], g.qubits) for g in reversed(reducing)])


def random_cliffords(n: int, count: int, rng: np.random.Generator) -> list[CliffordTableau]:
    return [random_clifford(n, rng) for _ in range(count)]


def stack_unitaries(tableaus) -> np.ndarray:
    """``(N, 2^n, 2^n)`` array of the synthesized unitaries."""
    return np.stack([t.unitary for t in tableaus])
