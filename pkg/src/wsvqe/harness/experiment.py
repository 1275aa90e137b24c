"""Instance generation and variant sweeps with CSV traces and a JSON manifest."""

from __future__ import annotations

import hashlib
import io
import json
import logging
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy

from ..ansatz import AnsatzSpec
from ..errors import DomainError
from ..pipeline import EXPERIMENT_VARIANTS, ProblemInstance, RunTrace, ShotBudget, run_variant
from .instances import generate_instance, load_instance, save_instance, write_atomic
from .seeding import STREAM_RUN, derive_rng

log = logging.getLogger(__name__)

TRACE_COLUMNS = [
    "phase",
    "eval_index",
    "axis_iteration",
    "cumulative_shots",
    "objective",
    "exact_expectation",
    "ratio_objective",
    "ratio_exact",
]
VARIANT_ORDER = list(EXPERIMENT_VARIANTS)


@dataclass(frozen=True)
class ExperimentConfig:
    seed: int
    instances: int = 50
    size: int = 8
    sparsity: float = 0.5
    bound: float = 5.0
    n_shots: int = 200
    n_snaps: int = 400
    variants: tuple[str, ...] = tuple(VARIANT_ORDER)
    acae_max_evals: int = 50
    vqe_max_evals: int = 100
    reps: int = 2
    reuse_unitaries: bool = True
    workers: int = 1

    def __post_init__(self):
        for name in ("instances", "size", "n_shots", "n_snaps", "acae_max_evals", "vqe_max_evals", "workers"):
            if getattr(self, name) < 1:
                raise DomainError(f"{name} must be >= 1")
        if not 0.0 <= self.sparsity <= 1.0:
            raise DomainError("sparsity must be in [0, 1]")
        if self.size & (self.size - 1):
            raise DomainError("matrix size must be a power of two")
        unknown = set(self.variants) - set(EXPERIMENT_VARIANTS)
        if unknown:
            raise DomainError(f"unknown variants {sorted(unknown)}")

    @property
    def budget(self) -> ShotBudget:
        return ShotBudget(self.n_shots, self.n_snaps)

    @property
    def spec(self) -> AnsatzSpec:
        return AnsatzSpec(self.size.bit_length() - 1, self.reps)

    def hash(self) -> str:
        """Digest of everything that affects trace contents (not parallelism)."""
        d = asdict(self)
        d.pop("workers")
        d["variants"] = list(d["variants"])
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()


def gen_instances(cfg: ExperimentConfig, out_dir: Path) -> list[Path]:
    out_dir = Path(out_dir)
    paths = []
    for k in range(cfg.instances):
        inst = generate_instance(cfg.seed, k, cfg.size, cfg.sparsity, cfg.bound)
        paths.append(save_instance(inst, out_dir))
    return paths


def _fmt(x) -> str:
    return repr(float(x))


def trace_to_csv(trace: RunTrace) -> str:
    n_params = len(trace.records[0].params) if trace.records else 0
    buf = io.StringIO()
    buf.write(",".join(TRACE_COLUMNS + [f"theta_{k}" for k in range(n_params)]) + "\n")
    for r in trace.records:
        row = [
            r.phase,
            str(r.eval_index),
            str(r.axis_iteration),
            str(r.cumulative_shots),
            _fmt(r.objective),
            _fmt(r.exact_expectation),
            _fmt(r.ratio_objective),
            _fmt(r.ratio_exact),
        ]
        row.extend(_fmt(p) for p in r.params)
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def trace_filename(cfg_hash: str, variant: str, instance_id: str) -> str:
    return f"trace__{cfg_hash[:12]}__{variant}__{instance_id}.csv"


def _run_one(cfg: ExperimentConfig, instance: ProblemInstance, index: int, variant: str) -> tuple[str, float | None, float | None]:
    rng = derive_rng(cfg.seed, STREAM_RUN, index, VARIANT_ORDER.index(variant), 0)
    trace = run_variant(
        instance, variant, cfg.spec, cfg.budget, cfg.acae_max_evals, cfg.vqe_max_evals, cfg.reuse_unitaries, rng
    )
    return trace_to_csv(trace), trace.f_final, trace.rhobeg


def _task(args):
    cfg, path, index, variant = args
    try:
        inst = load_instance(path)
        text, f_final, rhobeg = _run_one(cfg, inst, index, variant)
        return {
            "ok": True,
            "csv": text,
            "f_final": f_final,
            "rhobeg": rhobeg,
            # shot accounting under either reading: grouped circuits or one circuit per string
            "n_terms": sum(not t.is_identity for t in inst.terms),
            "n_groups": inst.plan.circuits_per_evaluation,
        }
    except Exception as exc:  # recorded in the manifest; the sweep goes on
        return {"ok": False, "error": f"{type(exc).__name__}: {exc}"}


def versions() -> dict:
    from .. import __version__

    return {"python": platform.python_version(), "numpy": np.__version__, "scipy": scipy.__version__, "wsvqe": __version__}


def run_experiment(cfg: ExperimentConfig, instance_dir: Path, out_dir: Path) -> dict:
    """Run every variant on every instance file; returns the manifest.

    Failed runs are listed in the manifest with their error and do not stop
    the sweep.
    """
    instance_paths = sorted(Path(instance_dir).glob("instance_*.json"))
    if not instance_paths:
        raise FileNotFoundError(f"no instance files in {instance_dir}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cfg_hash = cfg.hash()
    tasks = [(cfg, p, k, v) for k, p in enumerate(instance_paths) for v in cfg.variants]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_task, tasks))
    else:
        results = [_task(t) for t in tasks]

    runs = []
    for (_, path, k, variant), res in zip(tasks, results):
        inst_id = path.stem.removeprefix("instance_")
        entry = {"instance": inst_id, "instance_file": path.name, "variant": variant, "index": k}
        if res["ok"]:
            name = trace_filename(cfg_hash, variant, inst_id)
            write_atomic(out_dir / name, res["csv"])
            entry.update(
                status="ok", file=name, f_final=res["f_final"], rhobeg=res["rhobeg"],
                n_terms=res["n_terms"], n_groups=res["n_groups"],
            )
        else:
            log.warning("run %s/%s failed: %s", inst_id, variant, res["error"])
            entry.update(status="failed", file=None, error=res["error"])
        runs.append(entry)
    manifest = {
        "config": {**asdict(cfg), "variants": list(cfg.variants)},
        "config_hash": cfg_hash,
        "seed": cfg.seed,
        "instance_dir": str(instance_dir),
        "versions": versions(),
        "runs": runs,
        "failures": sum(r["status"] != "ok" for r in runs),
    }
    write_atomic(out_dir / "manifest.json", json.dumps(manifest, indent=1) + "\n")
    return manifest
