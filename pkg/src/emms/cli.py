"""Command-line surface.

Subcommands: ``score`` (one model), ``rank`` (manifest pipeline), ``eval``
(metrics from two model,score CSVs), ``synth`` (emit a synthetic suite to
disk), ``bench`` (timing harness). Exit codes: 0 success, 1 input error,
2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import EmmsError, InputError, IoFailureError, NumericalError, ZeroVarianceError
from .labels import FeatureMatrix, normalize_flabels, one_hot_stack, stack_flabels
from .metrics import ScorePair, kendall_tau, pearson, rel_at_k, weighted_kendall_tau, weighted_pearson
from .npyio import read_npy, write_npy
from .pipeline import SCHEMA_VERSION, load_manifest, run_benchmark, run_ranking
from .solver import SolverConfig, solve
from .synth import GENERATOR_NAME, generate_model_suite
from .tabular import read_int_labels, read_score_table, write_score_table

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    # Usage problems are input errors; argparse's default exit code 2 is
    # reserved for numerical failures here.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", choices=("pgd", "fast"), default="fast")
    p.add_argument("--max-iters", type=int, default=None, help="outer iteration budget")
    p.add_argument("--tol", type=float, default=1e-6, help="relative score-change tolerance")
    p.add_argument("--ridge", type=float, default=None, help="least-squares ridge (default adaptive)")


def _config(args) -> SolverConfig:
    return SolverConfig(
        algorithm=args.algorithm,
        max_outer_iters=args.max_iters,
        tol=args.tol,
        ridge=args.ridge,
    )


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_score(args) -> int:
    feats = FeatureMatrix(read_npy(args.features))
    if args.one_hot:
        if args.classes is None:
            raise InputError("--one-hot needs --classes")
        stack = one_hot_stack(read_int_labels(args.one_hot), args.classes)
    else:
        if not args.flabels:
            raise InputError("provide --flabels files or --one-hot labels")
        stack = stack_flabels([normalize_flabels(read_npy(p)) for p in args.flabels])
    sol = solve(feats, stack, _config(args))
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "t_score": -sol.score,
            "objective": sol.score,
            "iters": sol.iters,
            "converged": sol.converged,
        },
        args.out,
    )
    return EXIT_OK


def _cmd_rank(args) -> int:
    report = run_ranking(load_manifest(args.manifest), _config(args))
    text = report.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_eval(args) -> int:
    t_scores = dict(read_score_table(args.scores))
    g_scores = dict(read_score_table(args.truth))
    missing = sorted(set(t_scores) ^ set(g_scores))
    if missing:
        raise InputError(f"model ids differ between the two files: {missing}")
    pairs = [ScorePair(mid, t_scores[mid], g_scores[mid]) for mid in sorted(t_scores)]
    metrics: dict[str, float] = {
        "kendall_tau": kendall_tau(pairs),
        "weighted_kendall_tau": weighted_kendall_tau(pairs),
        "rel_at_1": rel_at_k(pairs, 1),
    }
    if len(pairs) >= 3:
        metrics["rel_at_3"] = rel_at_k(pairs, 3)
    warnings = []
    for name, fn in (("pearson", pearson), ("weighted_pearson", weighted_pearson)):
        try:
            metrics[name] = fn(pairs)
        except ZeroVarianceError as exc:
            warnings.append(f"{name}: {exc}")
    _emit(
        {
            "schema_version": SCHEMA_VERSION,
            "models": len(pairs),
            "metrics": metrics,
            "warnings": warnings,
        },
        args.out,
    )
    return EXIT_OK


def _cmd_synth(args) -> int:
    quality = (
        [float(q) for q in args.quality.split(",")]
        if args.quality
        else [1.0 - i / max(args.models - 1, 1) for i in range(args.models)]
    )
    sigma = (
        [float(s) for s in args.sigma.split(",")]
        if args.sigma
        else [0.1] + [0.2 + 0.4 * j for j in range(args.k)]
    )
    task, models = generate_model_suite(
        args.models,
        quality,
        n=args.n,
        d=args.d,
        l=args.l,
        k=args.k,
        sigma=sigma,
        seed=args.seed,
    )
    os.makedirs(args.out, exist_ok=True)

    flabel_files = []
    for j, slice_ in enumerate(task.z.slices):
        name = f"flabels_{j:02d}.npy"
        write_npy(os.path.join(args.out, name), slice_)
        flabel_files.append(name)
    model_entries = []
    gt_pairs = []
    for model_id, feats, g in models:
        name = f"features_{model_id}.npy"
        write_npy(os.path.join(args.out, name), feats.data)
        model_entries.append({"id": model_id, "features": name})
        gt_pairs.append((model_id, g))
    write_score_table(os.path.join(args.out, "ground_truth.csv"), gt_pairs)
    manifest = {
        "task_name": f"synth-seed{args.seed}",
        "models": model_entries,
        "flabels": flabel_files,
        "ground_truth": "ground_truth.csv",
        "generator": GENERATOR_NAME,
        "seed": args.seed,
        "sigma": sigma,
    }
    manifest_path = os.path.join(args.out, "manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=2)
        fh.write("\n")
    print(manifest_path)
    return EXIT_OK


def _cmd_bench(args) -> int:
    manifest = load_manifest(args.manifest)
    cfg_pgd = SolverConfig(
        algorithm="pgd",
        max_outer_iters=args.max_iters or 200,
        tol=args.tol,
        ridge=args.ridge,
    )
    cfg_fast = SolverConfig(
        algorithm="fast",
        max_outer_iters=None,
        tol=args.tol,
        ridge=args.ridge,
    )
    _emit(run_benchmark(manifest, (cfg_pgd, cfg_fast)), args.out)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="emms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("score", help="score one model's features against F-Labels")
    p.add_argument("--features", required=True, help="NPY feature matrix")
    p.add_argument("--flabels", nargs="*", default=[], help="NPY F-Label files, oracle order")
    p.add_argument("--one-hot", default=None, help="labels file (one integer per line)")
    p.add_argument("--classes", type=int, default=None, help="class count for --one-hot")
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_score)

    p = sub.add_parser("rank", help="rank every model in a manifest")
    p.add_argument("--manifest", required=True)
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_rank)

    p = sub.add_parser("eval", help="metrics from two model,score CSVs")
    p.add_argument("--scores", required=True, help="transferability scores CSV")
    p.add_argument("--truth", required=True, help="ground-truth CSV")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("synth", help="emit a synthetic model suite to disk")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--models", type=int, default=5)
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--d", type=int, default=16)
    p.add_argument("--l", type=int, default=4)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--sigma", default=None, help="comma list, regression error first")
    p.add_argument("--quality", default=None, help="comma list in [0,1], one per model")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_synth)

    p = sub.add_parser("bench", help="time both solvers on identical inputs")
    p.add_argument("--manifest", required=True)
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/usage exits; keep main() returning codes
        code = exc.code
        return int(code) if isinstance(code, int) else EXIT_INPUT
    try:
        return args.fn(args)
    except NumericalError as exc:
        print(f"emms: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (InputError, IoFailureError, OSError) as exc:
        print(f"emms: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except EmmsError as exc:
        print(f"emms: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
