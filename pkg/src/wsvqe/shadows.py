"""Clifford classical shadows and the shadow-based fidelity estimator."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .clifford import CliffordTableau, stack_unitaries
from .errors import DomainError
from .statevector import StateVector, sample_indices


@dataclass(frozen=True)
class Snapshot:
    unitary: CliffordTableau
    outcome: int


@dataclass(frozen=True)
class ShadowSet:
    n: int
    snapshots: tuple[Snapshot, ...]

    def __post_init__(self):
        if not self.snapshots:
            raise DomainError("a shadow needs at least one snapshot")
        for s in self.snapshots:
            if s.unitary.n != self.n:
                raise DomainError("snapshot qubit counts differ")
            if not 0 <= s.outcome < (1 << self.n):
                raise DomainError(f"outcome {s.outcome} out of range")

    def __len__(self) -> int:
        return len(self.snapshots)

    @property
    def shots(self) -> int:
        return len(self.snapshots)


class CliffordEnsemble:
    """A fixed list of Clifford tableaus with their unitaries stacked for batch use."""

    def __init__(self, tableaus: Sequence[CliffordTableau]):
        if not tableaus:
            raise DomainError("empty unitary list")
        self.tableaus = list(tableaus)
        self.n = self.tableaus[0].n
        self.matrices = stack_unitaries(self.tableaus)

    def __len__(self) -> int:
        return len(self.tableaus)


def _ensemble(unitaries) -> CliffordEnsemble:
    return unitaries if isinstance(unitaries, CliffordEnsemble) else CliffordEnsemble(unitaries)


def measure_outcomes(psi: np.ndarray, ensemble: CliffordEnsemble, rng: np.random.Generator) -> np.ndarray:
    """One computational-basis outcome of ``U_i |psi>`` for every ``U_i``."""
    rotated = ensemble.matrices @ psi
    probs = np.abs(rotated) ** 2
    cdf = np.cumsum(probs, axis=1)
    u = rng.random(len(ensemble)) * cdf[:, -1]
    out = (cdf <= u[:, None]).sum(axis=1)
    return np.minimum(out, probs.shape[1] - 1)


def take_snapshots(
    prepare: Callable[[np.ndarray], StateVector],
    params,
    unitaries: Sequence[CliffordTableau] | CliffordEnsemble,
    rng: np.random.Generator,
) -> ShadowSet:
    """Measure the prepared state once after each random Clifford (one shot per snapshot)."""
    ens = _ensemble(unitaries)
    state = prepare(params)
    if state.n_qubits != ens.n:
        raise DomainError("state and unitaries act on different qubit counts")
    outcomes = measure_outcomes(state.amplitudes, ens, rng)
    return ShadowSet(ens.n, tuple(Snapshot(t, int(b)) for t, b in zip(ens.tableaus, outcomes)))


def fidelity_terms(matrices: np.ndarray, outcomes: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Per-snapshot estimates ``(2^n + 1) |<b_i|U_i|target>|^2 - 1``."""
    d = matrices.shape[-1]
    amps = matrices[np.arange(len(outcomes)), outcomes, :] @ target
    return (d + 1) * np.abs(amps) ** 2 - 1.0


def estimate_fidelity(shadow: ShadowSet, target) -> float:
    """Unbiased, unclipped shadow estimate of ``<target| rho |target>``."""
    target = np.asarray(target, dtype=complex)
    if target.shape != (1 << shadow.n,):
        raise DomainError(f"target shape {target.shape} does not match {shadow.n} qubits")
    mats = stack_unitaries([s.unitary for s in shadow.snapshots])
    outcomes = np.array([s.outcome for s in shadow.snapshots])
    return float(fidelity_terms(mats, outcomes, target).mean())


class FidelityEstimator:
    """Repeated shadow fidelity estimates against a fixed target and ensemble."""

    def __init__(self, target, ensemble: CliffordEnsemble):
        self.target = np.asarray(target, dtype=complex)
        if self.target.shape != (1 << ensemble.n,):
            raise DomainError("target dimension does not match the ensemble")
        self.ensemble = ensemble
        d = self.target.shape[0]
        # |<b|U|target>|^2 for every unitary and outcome, reused across evaluations
        self._overlaps = (d + 1) * np.abs(ensemble.matrices @ self.target) ** 2 - 1.0

    def __call__(self, psi: np.ndarray, rng: np.random.Generator) -> float:
        outcomes = measure_outcomes(psi, self.ensemble, rng)
        return float(self._overlaps[np.arange(len(outcomes)), outcomes].mean())
