"""Command line entry point: ``wsvqe {gen,run,summarize,landscape,plot}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from ..ansatz import AnsatzSpec
from ..errors import DomainError
from .csvio import CSVFormatError
from .experiment import VARIANT_ORDER, ExperimentConfig, gen_instances, run_experiment
from .instances import load_instance, load_instances, write_atomic
from .landscape import REFERENCE_RATIOS, LandscapeRequest, landscape, landscape_csv, nearest_ratio_instances
from .plot import plot_file
from .summary import STATISTICS, MixedConfigError, summarize

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, required=True, help="master seed")
    p.add_argument("--instances", dest="count", type=int, default=50, help="instance count")
    p.add_argument("--size", type=int, default=8, help="matrix dimension")
    p.add_argument("--sparsity", type=float, default=0.5, help="probability of a zero entry")
    p.add_argument("--bound", type=float, default=5.0, help="entry range [-bound, bound]")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wsvqe", description="Warm-started VQE experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="generate random Hermitian instances")
    _config_args(g)
    g.add_argument("--out", type=Path, required=True, help="instance directory")

    r = sub.add_parser("run", help="run the variant sweep over an instance directory")
    _config_args(r)
    r.add_argument("--instance-dir", type=Path, required=True)
    r.add_argument("--out", type=Path, required=True, help="trace directory")
    r.add_argument("--variants", nargs="+", default=VARIANT_ORDER, choices=VARIANT_ORDER)
    r.add_argument("--n-shots", type=int, default=200)
    r.add_argument("--n-snaps", type=int, default=400)
    r.add_argument("--acae-evals", type=int, default=50)
    r.add_argument("--vqe-evals", type=int, default=100)
    r.add_argument("--reps", type=int, default=2)
    r.add_argument("--fresh-unitaries", action="store_true", help="new Cliffords every ACAE evaluation")
    r.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("summarize", help="median ratio curves from a trace directory")
    s.add_argument("trace_dir", type=Path)
    s.add_argument("--out", type=Path, required=True)
    s.add_argument("--first", type=int, default=20)
    s.add_argument("--last", type=int, default=100)
    s.add_argument("--statistic", choices=STATISTICS, default="best")
    s.add_argument("--column", choices=["ratio_exact", "ratio_objective"], default="ratio_exact")

    la = sub.add_parser("landscape", help="2-D parameter slice of one instance")
    src = la.add_mutually_exclusive_group(required=True)
    src.add_argument("--instance", type=Path, help="instance JSON file")
    src.add_argument("--instance-dir", type=Path, help="pick the instance with classical ratio nearest --ratio")
    la.add_argument("--ratio", type=float, default=REFERENCE_RATIOS[0], help="target classical ratio with --instance-dir")
    la.add_argument("--axes", type=int, nargs=2, metavar=("I", "J"), help="parameter indices (random if omitted)")
    la.add_argument("--seed", type=int, required=True)
    la.add_argument("--steps", type=int, default=40, help="grid intervals across [-pi, pi]")
    la.add_argument("--n-shots", type=int, default=200)
    la.add_argument("--n-snaps", type=int, default=400)
    la.add_argument("--out", type=Path, required=True)

    pl = sub.add_parser("plot", help="render a summary or landscape CSV as SVG")
    pl.add_argument("csv", type=Path)
    pl.add_argument("--out", type=Path, required=True)
    pl.add_argument("--title", default="")
    return parser


def _experiment_config(args, **extra) -> ExperimentConfig:
    return ExperimentConfig(
        seed=args.seed, instances=args.count, size=args.size, sparsity=args.sparsity, bound=args.bound, **extra
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "gen":
            paths = gen_instances(_experiment_config(args), args.out)
            print(f"wrote {len(paths)} instances to {args.out}")
        elif args.command == "run":
            cfg = _experiment_config(
                args,
                n_shots=args.n_shots,
                n_snaps=args.n_snaps,
                variants=tuple(args.variants),
                acae_max_evals=args.acae_evals,
                vqe_max_evals=args.vqe_evals,
                reps=args.reps,
                reuse_unitaries=not args.fresh_unitaries,
                workers=args.workers,
            )
            manifest = run_experiment(cfg, args.instance_dir, args.out)
            print(f"{len(manifest['runs'])} runs, {manifest['failures']} failed; manifest in {args.out}")
            if manifest["failures"]:
                return EXIT_FAILURE
        elif args.command == "summarize":
            text = summarize(args.trace_dir, args.first, args.last, args.statistic, args.column)
            write_atomic(args.out, text)
        elif args.command == "landscape":
            if args.instance is not None:
                inst = load_instance(args.instance)
            else:
                (inst,) = nearest_ratio_instances(load_instances(args.instance_dir), (args.ratio,))
            if args.axes is None:
                rng = np.random.default_rng(args.seed)
                axes = rng.choice(AnsatzSpec().num_parameters, size=2, replace=False)
            else:
                axes = args.axes
            req = LandscapeRequest(
                inst, int(axes[0]), int(axes[1]), args.seed, step=2 * np.pi / args.steps,
                n_shots=args.n_shots, n_snaps=args.n_snaps,
            )
            write_atomic(args.out, landscape_csv(landscape(req)))
            print(json.dumps({"instance": inst.id, "r_classical": inst.approx_ratio_classical, "axes": [req.axis_i, req.axis_j]}))
        elif args.command == "plot":
            plot_file(args.csv, args.out, args.title)
    except (DomainError, CSVFormatError, MixedConfigError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"wsvqe {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
