"""Derivative-free minimization with COBYLA and a full evaluation trace.

The trust-region work is delegated to SciPy's COBYLA (Powell's method). This
module pins the contract around it: ``rhobeg`` is the initial simplex step,
the evaluation budget is a hard cap, every evaluation is recorded, and a
non-finite objective aborts the run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .errors import DomainError, NonFiniteObjectiveError

DEFAULT_RHOEND = 1e-4


@dataclass(frozen=True)
class OptimizerConfig:
    rhobeg: float
    rhoend: float = DEFAULT_RHOEND
    max_evals: int = 100

    def __post_init__(self):
        if not 0 < self.rhoend <= self.rhobeg:
            raise DomainError(f"need 0 < rhoend <= rhobeg, got {self.rhoend}, {self.rhobeg}")
        if self.max_evals < 0:
            raise DomainError("max_evals must be >= 0")


@dataclass
class OptimizationResult:
    best_params: np.ndarray
    best_value: float
    evaluations: int
    trace: list[tuple[np.ndarray, float]] = field(default_factory=list)


def minimize(objective: Callable[[np.ndarray], float], x0, cfg: OptimizerConfig) -> OptimizationResult:
    """Minimize ``objective`` from ``x0`` without constraints.

    The first ``d + 1`` evaluations are ``x0`` and ``x0 + rhobeg * e_k``.
    At most ``cfg.max_evals`` evaluations are made, except that ``x0`` is
    always evaluated so a budget of zero still yields a result. The result holds the best
    point seen, which for a noisy objective may differ from the point
    COBYLA finishes at.
    """
    x0 = np.array(x0, dtype=float)
    trace: list[tuple[np.ndarray, float]] = []

    def wrapped(x: np.ndarray) -> float:
        x = np.array(x, dtype=float)
        value = float(objective(x))
        if not math.isfinite(value):
            raise NonFiniteObjectiveError(x, value)
        trace.append((x, value))
        return value

    if cfg.max_evals <= 1:
        wrapped(x0)
    else:
        _scipy_minimize(
            wrapped,
            x0,
            method="COBYLA",
            options={"rhobeg": cfg.rhobeg, "tol": cfg.rhoend, "maxiter": cfg.max_evals},
        )
    best = min(range(len(trace)), key=lambda i: trace[i][1])
    return OptimizationResult(trace[best][0].copy(), trace[best][1], len(trace), trace)
