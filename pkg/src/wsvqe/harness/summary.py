"""Median approximation-ratio curves over a directory of traces."""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .csvio import read_table
from .experiment import TRACE_COLUMNS, VARIANT_ORDER

_NAME = re.compile(r"^trace__(?P<cfg>[0-9a-f]+)__(?P<variant>[a-z_]+)__(?P<instance>[^_][^/]*)\.csv$")

STATISTICS = ("best", "incumbent")


class MixedConfigError(ValueError):
    pass


def trace_curve(rows: list[dict], iterations, statistic: str = "best", column: str = "ratio_exact") -> np.ndarray:
    """Ratio of one run at each axis iteration, using only VQE-phase records.

    ``best`` is the running maximum of ``column``. ``incumbent`` is
    ``column`` at the record with the lowest objective so far, i.e. the
    point the optimizer would return if stopped there. Iterations before
    the first VQE record take that record's value.
    """
    vqe = [r for r in rows if r["phase"] == "VQE"]
    if not vqe:
        raise ValueError("trace has no VQE records")
    axis = np.array([r["axis_iteration"] for r in vqe])
    values = np.array([r[column] for r in vqe])
    if statistic == "best":
        running = np.maximum.accumulate(values)
    elif statistic == "incumbent":
        obj = np.array([r["objective"] for r in vqe])
        best_idx = np.zeros(len(obj), dtype=int)
        for k in range(1, len(obj)):
            best_idx[k] = k if obj[k] < obj[best_idx[k - 1]] else best_idx[k - 1]
        running = values[best_idx]
    else:
        raise ValueError(f"unknown statistic {statistic!r}")
    out = np.empty(len(iterations))
    for j, i in enumerate(iterations):
        k = np.searchsorted(axis, i, side="right") - 1
        out[j] = running[max(k, 0)]
    return out


def load_traces(trace_dir: Path) -> dict[str, list[tuple[str, list[dict]]]]:
    """``{variant: [(instance_id, rows), ...]}`` for every trace file in the directory."""
    files = sorted(Path(trace_dir).glob("trace__*.csv"))
    if not files:
        raise FileNotFoundError(f"no trace files in {trace_dir}")
    configs = set()
    out: dict[str, list] = {}
    for f in files:
        m = _NAME.match(f.name)
        if not m:
            raise ValueError(f"unrecognized trace file name {f.name}")
        configs.add(m["cfg"])
        rows = read_table(f, TRACE_COLUMNS, text_columns=("phase",))
        out.setdefault(m["variant"], []).append((m["instance"], rows))
    if len(configs) > 1:
        raise MixedConfigError(f"traces from {len(configs)} different configs in {trace_dir}: {sorted(configs)}")
    for v in out.values():
        v.sort(key=lambda t: t[0])
    return out


def median_curves(
    traces: dict[str, list[tuple[str, list[dict]]]],
    first: int = 20,
    last: int = 100,
    statistic: str = "best",
    column: str = "ratio_exact",
) -> dict[str, np.ndarray]:
    iterations = np.arange(first, last + 1)
    curves = {}
    order = [v for v in VARIANT_ORDER if v in traces] + sorted(set(traces) - set(VARIANT_ORDER))
    for variant in order:
        per_run = np.array([trace_curve(rows, iterations, statistic, column) for _, rows in traces[variant]])
        curves[variant] = np.median(per_run, axis=0)
    return curves


def summarize(
    trace_dir: Path,
    first: int = 20,
    last: int = 100,
    statistic: str = "best",
    column: str = "ratio_exact",
) -> str:
    """Median-curve CSV text with columns ``variant, axis_iteration, median_ratio, runs``."""
    traces = load_traces(trace_dir)
    curves = median_curves(traces, first, last, statistic, column)
    lines = ["variant,axis_iteration,median_ratio,runs"]
    for variant, curve in curves.items():
        for i, value in zip(range(first, last + 1), curve):
            lines.append(f"{variant},{i},{float(value)!r},{len(traces[variant])}")
    return "\n".join(lines) + "\n"
