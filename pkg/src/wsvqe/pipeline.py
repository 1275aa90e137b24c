"""VQE, ACAE pretraining, and their warm-started composition.

All runs return a :class:`RunTrace` with one record per objective
evaluation. Evaluations double as iterations on the reporting axis; ACAE
evaluations are mapped onto that axis by their shot cost relative to one
VQE evaluation of the same instance.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import ansatz as _ansatz
from .ansatz import AnsatzSpec
from .clifford import random_cliffords
from .errors import DomainError
from .numerics import (
    EigenPair,
    approximate_ground_vector,
    check_hermitian,
    eig_hermitian_min,
    rayleigh_quotient,
)
from .optimizer import OptimizerConfig, minimize
from .pauli import QEEPlan, decompose, exact_expectation
from .shadows import CliffordEnsemble, FidelityEstimator

RHO_VQE = 3 * np.pi / 8
RHO_ACAE = np.pi / 4
RHO_STATIC = RHO_VQE / 2
F_FINAL_CLAMP = (0.125, 1.0)


@dataclass(frozen=True)
class ProblemInstance:
    id: str
    H: np.ndarray
    reference: EigenPair
    approx_vector: np.ndarray
    approx_ratio_classical: float

    @property
    def lambda_ref(self) -> float:
        return self.reference.value

    @property
    def n_qubits(self) -> int:
        return self.H.shape[0].bit_length() - 1

    @cached_property
    def terms(self):
        return decompose(self.H)

    @cached_property
    def plan(self) -> QEEPlan:
        return QEEPlan(self.terms)

    def vqe_shots_per_iteration(self, n_shots: int) -> int:
        return self.plan.circuits_per_evaluation * n_shots


def make_instance(id: str, H, rng: np.random.Generator, power_steps: int = 3) -> ProblemInstance:
    """Solve ``H`` exactly and attach the classical approximate ground vector."""
    H = check_hermitian(H)
    ref = eig_hermitian_min(H)
    q = approximate_ground_vector(H, rng, k=power_steps)
    ratio = rayleigh_quotient(H, q) / ref.value
    return ProblemInstance(id, H, ref, q, ratio)


@dataclass(frozen=True)
class ShotBudget:
    n_shots: int = 200
    n_snaps: int = 400

    def __post_init__(self):
        if self.n_shots < 1 or self.n_snaps < 1:
            raise DomainError(f"shot counts must be >= 1, got {self}")


class RhobegVariant(enum.Enum):
    VQE_BASE = "vqe"
    ACAE_BASE = "acae"
    WS_STATIC = "static"
    WS_DYNAMIC = "dynamic"

    def rhobeg(self, f_final: float | None = None) -> float:
        if self is RhobegVariant.VQE_BASE:
            return RHO_VQE
        if self is RhobegVariant.ACAE_BASE:
            return RHO_ACAE
        if self is RhobegVariant.WS_STATIC:
            return RHO_STATIC
        if f_final is None:
            raise DomainError("dynamic rhobeg needs the final ACAE fidelity")
        return dynamic_rhobeg(f_final)


def dynamic_rhobeg(f_final: float) -> float:
    """``(1 / f) * (1/4) * rho_VQE`` with ``f`` clamped to ``[0.125, 1]``."""
    lo, hi = F_FINAL_CLAMP
    f = min(max(float(f_final), lo), hi)
    return (1.0 / f) * 0.25 * RHO_VQE


def rescale_iterations(acae_total_shots: int, vqe_shots_per_iteration: int) -> int:
    """Smallest number of VQE iterations whose shots cover ``acae_total_shots``."""
    if vqe_shots_per_iteration < 1:
        raise DomainError("vqe_shots_per_iteration must be >= 1")
    if acae_total_shots < 0:
        raise DomainError("acae_total_shots must be >= 0")
    return -(-acae_total_shots // vqe_shots_per_iteration)


@dataclass(frozen=True)
class TraceRecord:
    phase: str
    eval_index: int
    axis_iteration: int
    cumulative_shots: int
    objective: float
    exact_expectation: float
    ratio_objective: float
    ratio_exact: float
    params: np.ndarray


@dataclass
class RunTrace:
    records: list[TraceRecord] = field(default_factory=list)
    f_final: float | None = None
    rhobeg: float | None = None

    def phase(self, name: str) -> list[TraceRecord]:
        return [r for r in self.records if r.phase == name]

    @property
    def total_shots(self) -> int:
        return self.records[-1].cumulative_shots if self.records else 0

    def extend(self, other: "RunTrace") -> None:
        self.records.extend(other.records)


def run_vqe(
    instance: ProblemInstance,
    spec: AnsatzSpec,
    x0,
    budget: ShotBudget,
    cfg: OptimizerConfig,
    rng: np.random.Generator,
    *,
    shots_offset: int = 0,
    axis_offset: int = 0,
) -> RunTrace:
    """Minimize the shot-estimated energy of ``instance`` starting from ``x0``."""
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (spec.num_parameters,):
        raise DomainError(f"x0 has shape {x0.shape}, ansatz needs {spec.num_parameters}")
    plan = instance.plan
    per_eval = plan.circuits_per_evaluation * budget.n_shots
    lam = instance.lambda_ref
    trace = RunTrace()
    cumulative = shots_offset

    def objective(params: np.ndarray) -> float:
        nonlocal cumulative
        psi = _ansatz.prepare(spec, params)
        value = plan.estimate(psi.amplitudes, budget.n_shots, rng)
        exact = exact_expectation(psi, instance.H)
        cumulative += per_eval
        k = len(trace.records) + 1
        trace.records.append(
            TraceRecord("VQE", k, axis_offset + k, cumulative, value, exact, value / lam, exact / lam, params.copy())
        )
        return value

    minimize(objective, x0, cfg)
    return trace


def run_acae(
    target,
    spec: AnsatzSpec,
    x0,
    budget: ShotBudget,
    cfg: OptimizerConfig,
    reuse_unitaries: bool,
    rng: np.random.Generator,
    *,
    instance: ProblemInstance | None = None,
    vqe_shots_per_iteration: int | None = None,
) -> tuple[np.ndarray, float, RunTrace]:
    """Train the ansatz to encode ``target`` by maximizing the shadow fidelity estimate.

    With ``reuse_unitaries`` the ``n_snaps`` Cliffords are drawn once and kept
    for every evaluation; otherwise a fresh set is drawn per evaluation.
    Returns ``(params, f_final, trace)`` where ``f_final`` is the estimate
    at the returned parameters. Records carry the estimated fidelity as
    their objective; energy columns are filled when ``instance`` is given.
    """
    target = np.asarray(target, dtype=complex)
    if abs(np.linalg.norm(target) - 1.0) > 1e-9:
        raise DomainError("target must have unit norm")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (spec.num_parameters,):
        raise DomainError(f"x0 has shape {x0.shape}, ansatz needs {spec.num_parameters}")
    n = spec.n_qubits
    fixed = FidelityEstimator(target, CliffordEnsemble(random_cliffords(n, budget.n_snaps, rng))) if reuse_unitaries else None
    trace = RunTrace()
    cumulative = 0

    def objective(params: np.ndarray) -> float:
        nonlocal cumulative
        est = fixed or FidelityEstimator(target, CliffordEnsemble(random_cliffords(n, budget.n_snaps, rng)))
        psi = _ansatz.prepare(spec, params)
        f_hat = est(psi.amplitudes, rng)
        cumulative += budget.n_snaps
        k = len(trace.records) + 1
        axis = rescale_iterations(cumulative, vqe_shots_per_iteration) if vqe_shots_per_iteration else k
        if instance is not None:
            exact = exact_expectation(psi, instance.H)
            ratio = exact / instance.lambda_ref
        else:
            exact = ratio = math.nan
        trace.records.append(
            TraceRecord("ACAE", k, axis, cumulative, f_hat, exact, math.nan, ratio, params.copy())
        )
        return -f_hat

    result = minimize(objective, x0, cfg)
    trace.f_final = -result.best_value
    trace.rhobeg = cfg.rhobeg
    return result.best_params, trace.f_final, trace


def run_ws_vqe(
    instance: ProblemInstance,
    spec: AnsatzSpec,
    variant: RhobegVariant,
    budget: ShotBudget,
    acae_max_evals: int,
    vqe_max_evals: int,
    reuse_unitaries: bool,
    rng: np.random.Generator,
) -> RunTrace:
    """ACAE pretraining toward ``instance.approx_vector`` followed by VQE from its parameters."""
    if variant not in (RhobegVariant.VQE_BASE, RhobegVariant.WS_STATIC, RhobegVariant.WS_DYNAMIC):
        raise DomainError(f"{variant} is not a VQE-phase rhobeg variant")
    per_iter = instance.vqe_shots_per_iteration(budget.n_shots)
    x0 = spec.random_parameters(rng)
    params, f_final, acae = run_acae(
        instance.approx_vector,
        spec,
        x0,
        budget,
        OptimizerConfig(RHO_ACAE, max_evals=acae_max_evals),
        reuse_unitaries,
        rng,
        instance=instance,
        vqe_shots_per_iteration=per_iter,
    )
    rhobeg = variant.rhobeg(f_final)
    vqe = run_vqe(
        instance,
        spec,
        params,
        budget,
        OptimizerConfig(rhobeg, max_evals=vqe_max_evals),
        rng,
        shots_offset=acae.total_shots,
        axis_offset=rescale_iterations(acae.total_shots, per_iter),
    )
    trace = RunTrace(acae.records + vqe.records, f_final=f_final, rhobeg=rhobeg)
    return trace


# Sweep configurations: (warm-started, rhobeg variant of the VQE phase)
EXPERIMENT_VARIANTS: dict[str, tuple[bool, RhobegVariant]] = {
    "vqe_rho_vqe": (False, RhobegVariant.VQE_BASE),
    "vqe_rho_static": (False, RhobegVariant.WS_STATIC),
    "ws_rho_vqe": (True, RhobegVariant.VQE_BASE),
    "ws_rho_static": (True, RhobegVariant.WS_STATIC),
    "ws_rho_dynamic": (True, RhobegVariant.WS_DYNAMIC),
}


def run_variant(
    instance: ProblemInstance,
    name: str,
    spec: AnsatzSpec,
    budget: ShotBudget,
    acae_max_evals: int,
    vqe_max_evals: int,
    reuse_unitaries: bool,
    rng: np.random.Generator,
) -> RunTrace:
    try:
        warm, variant = EXPERIMENT_VARIANTS[name]
    except KeyError:
        raise DomainError(f"unknown variant {name!r}; choose from {sorted(EXPERIMENT_VARIANTS)}") from None
    if warm:
        return run_ws_vqe(instance, spec, variant, budget, acae_max_evals, vqe_max_evals, reuse_unitaries, rng)
    x0 = spec.random_parameters(rng)
    rhobeg = variant.rhobeg()
    trace = run_vqe(instance, spec, x0, budget, OptimizerConfig(rhobeg, max_evals=vqe_max_evals), rng)
    trace.rhobeg = rhobeg
    return trace
