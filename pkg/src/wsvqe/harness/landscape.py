"""Two-dimensional slices of the parameter space."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ansatz import AnsatzSpec, prepare
from ..clifford import random_cliffords
from ..errors import DomainError
from ..pipeline import ProblemInstance
from ..shadows import CliffordEnsemble, FidelityEstimator
from ..statevector import fidelity_exact
from .seeding import STREAM_LANDSCAPE, derive_rng

# classical approximation ratios of the three instances shown in the reference landscapes
REFERENCE_RATIOS = (0.99, 0.86, 0.76)

LANDSCAPE_COLUMNS = ["theta_i", "theta_j", "expectation", "est_fidelity", "fid_approx", "fid_opt"]


@dataclass(frozen=True)
class LandscapeRequest:
    instance: ProblemInstance
    axis_i: int
    axis_j: int
    seed: int
    frozen: tuple[float, ...] | None = None
    step: float = np.pi / 20
    n_shots: int = 200
    n_snaps: int = 400
    spec: AnsatzSpec = AnsatzSpec()


def nearest_ratio_instances(instances, ratios=REFERENCE_RATIOS) -> list[ProblemInstance]:
    """For each ratio, the instance whose classical approximation ratio is closest (ties by id)."""
    pool = sorted(instances, key=lambda i: i.id)
    if not pool:
        raise DomainError("no instances to choose from")
    return [min(pool, key=lambda i: abs(i.approx_ratio_classical - r)) for r in ratios]


def grid_axis(step: float) -> np.ndarray:
    """Points ``-pi, -pi + step, ..., pi`` with both endpoints included."""
    count = int(round(2 * np.pi / step))
    if not np.isclose(count * step, 2 * np.pi):
        raise DomainError(f"step {step} does not divide 2*pi")
    return np.linspace(-np.pi, np.pi, count + 1)


def landscape(req: LandscapeRequest) -> list[tuple[float, ...]]:
    """Rows ``(theta_i, theta_j, expectation, est_fidelity, fid_approx, fid_opt)``.

    Parameters off the two axes are frozen, drawn uniformly from
    ``[-pi, pi]`` when not supplied. The shot-based energy uses
    ``n_shots`` per measurement circuit; the shadow fidelity estimate to
    the approximate eigenvector uses one fixed set of ``n_snaps`` Cliffords
    for the whole grid.
    """
    spec = req.spec
    d = spec.num_parameters
    if req.axis_i == req.axis_j or not (0 <= req.axis_i < d and 0 <= req.axis_j < d):
        raise DomainError(f"axes must be distinct indices in [0, {d}), got {req.axis_i}, {req.axis_j}")
    rng = derive_rng(req.seed, STREAM_LANDSCAPE)
    if req.frozen is None:
        base = rng.uniform(-np.pi, np.pi, d)
    else:
        base = np.array(req.frozen, dtype=float)
        if base.shape != (d,):
            raise DomainError(f"frozen parameters need length {d}")
    inst = req.instance
    estimator = FidelityEstimator(
        inst.approx_vector, CliffordEnsemble(random_cliffords(spec.n_qubits, req.n_snaps, rng))
    )
    plan = inst.plan
    rows = []
    for a in grid_axis(req.step):
        for b in grid_axis(req.step):
            params = base.copy()
            params[req.axis_i] = a
            params[req.axis_j] = b
            state = prepare(spec, params)
            psi = state.amplitudes
            rows.append(
                (
                    float(a),
                    float(b),
                    plan.estimate(psi, req.n_shots, rng),
                    estimator(psi, rng),
                    fidelity_exact(state, inst.approx_vector),
                    fidelity_exact(state, inst.reference.vector),
                )
            )
    return rows


def landscape_csv(rows) -> str:
    lines = [",".join(LANDSCAPE_COLUMNS)]
    lines.extend(",".join(repr(float(v)) for v in row) for row in rows)
    return "\n".join(lines) + "\n"
