"""Manifest-driven ranking and the timing harness.

A task manifest is one JSON document naming the models (id + features NPY),
the shared F-Label NPY files (their order defines the oracle index), an
optional ground-truth CSV, and optionally a one-hot block (labels path +
class count) selecting the one-hot label path instead of F-Label files.
Relative paths resolve against the manifest's directory.

``run_ranking`` scores every model, sorts by score (ties by model id),
attaches rank metrics when ground truth is present, and returns a report
that serializes deterministically: identical inputs give byte-identical JSON
except for the wall-clock fields.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import EmmsError, InputError, ShapeMismatchError, ZeroVarianceError, with_context
from .labels import FeatureMatrix, FLabelStack, normalize_flabels, one_hot_stack, stack_flabels
from .metrics import ScorePair, kendall_tau, pearson, rel_at_k, weighted_kendall_tau, weighted_pearson
from .npyio import read_npy
from .solver import SolverConfig, solve
from .tabular import read_ground_truth, read_int_labels

SCHEMA_VERSION = "1"
THREADS_ENV = "EMMS_THREADS"


@dataclass(frozen=True)
class ModelSpec:
    model_id: str
    features_path: str


@dataclass(frozen=True)
class TaskManifest:
    task_name: str
    models: tuple[ModelSpec, ...]
    flabel_paths: tuple[str, ...] = ()
    ground_truth_path: str | None = None
    one_hot_labels_path: str | None = None
    one_hot_classes: int | None = None


@dataclass
class RankingEntry:
    model_id: str
    t_score: float
    iters: int
    wall_clock_ms: float


@dataclass
class RankingReport:
    task_name: str
    entries: list[RankingEntry]
    metrics: dict[str, float]
    config: SolverConfig
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "task_name": self.task_name,
            "config": _config_dict(self.config),
            "entries": [
                {
                    "model_id": e.model_id,
                    "t_score": e.t_score,
                    "iters": e.iters,
                    "wall_clock_ms": e.wall_clock_ms,
                }
                for e in self.entries
            ],
            "metrics": self.metrics,
            "warnings": self.warnings,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


def _config_dict(cfg: SolverConfig) -> dict:
    return {
        "algorithm": cfg.algorithm,
        "max_outer_iters": cfg.resolved_max_outer(),
        "inner_t_iters": cfg.inner_t_iters,
        "tol": cfg.tol,
        "ridge": cfg.ridge,
        "eta_override": cfg.eta_override,
        "beta_override": cfg.beta_override,
        "intercept": cfg.intercept,
    }


def load_manifest(path) -> TaskManifest:
    path = os.fspath(path)
    base = os.path.dirname(os.path.abspath(path))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: not valid JSON ({exc})") from None

    def resolve(p: str) -> str:
        return p if os.path.isabs(p) else os.path.join(base, p)

    models_doc = doc.get("models")
    if not models_doc:
        raise InputError(f"{path}: manifest needs at least one model entry")
    models = []
    seen = set()
    for entry in models_doc:
        mid, feats = entry.get("id"), entry.get("features")
        if not mid or not feats:
            raise InputError(f"{path}: model entries need 'id' and 'features'")
        if mid in seen:
            raise InputError(f"{path}: duplicate model id {mid!r}")
        seen.add(mid)
        models.append(ModelSpec(mid, resolve(feats)))

    flabels = tuple(resolve(p) for p in doc.get("flabels", []))
    one_hot = doc.get("one_hot")
    if one_hot:
        if flabels:
            raise InputError(f"{path}: provide either 'flabels' or 'one_hot', not both")
        labels_path = one_hot.get("labels")
        classes = one_hot.get("classes")
        if not labels_path or not isinstance(classes, int):
            raise InputError(f"{path}: one_hot block needs 'labels' path and integer 'classes'")
        one_hot_labels, one_hot_classes = resolve(labels_path), classes
    else:
        if not flabels:
            raise InputError(f"{path}: manifest needs 'flabels' paths or a 'one_hot' block")
        one_hot_labels, one_hot_classes = None, None

    gt = doc.get("ground_truth")
    return TaskManifest(
        task_name=doc.get("task_name", os.path.basename(path)),
        models=tuple(models),
        flabel_paths=flabels,
        ground_truth_path=resolve(gt) if gt else None,
        one_hot_labels_path=one_hot_labels,
        one_hot_classes=one_hot_classes,
    )


def _build_stack(manifest: TaskManifest) -> FLabelStack:
    if manifest.one_hot_labels_path is not None:
        labels = read_int_labels(manifest.one_hot_labels_path)
        return one_hot_stack(labels, manifest.one_hot_classes)
    slices = []
    for p in manifest.flabel_paths:
        try:
            slices.append(normalize_flabels(read_npy(p)))
        except EmmsError as exc:
            raise with_context(exc, f"flabel file {p}") from exc
    return stack_flabels(slices)


def _thread_count(n_models: int) -> int:
    raw = os.environ.get(THREADS_ENV, "0")
    try:
        requested = int(raw)
    except ValueError:
        raise InputError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if requested < 0:
        raise InputError(f"{THREADS_ENV} must be >= 0, got {requested}")
    if requested == 0:
        requested = min(os.cpu_count() or 1, 8)
    return max(1, min(requested, n_models))


def _score_one(spec: ModelSpec, stack: FLabelStack, cfg: SolverConfig):
    try:
        feats = FeatureMatrix(read_npy(spec.features_path))
        if feats.n != stack.n:
            raise ShapeMismatchError(
                f"features file {spec.features_path} has {feats.n} rows "
                f"but the label stack has {stack.n}"
            )
        start = time.perf_counter()
        sol = solve(feats, stack, cfg)
        ms = (time.perf_counter() - start) * 1e3
    except EmmsError as exc:
        raise with_context(exc, f"model {spec.model_id!r}") from exc
    print(
        f"[emms] {spec.model_id}: T={-sol.score:.6g} iters={sol.iters} ({ms:.1f} ms)",
        file=sys.stderr,
    )
    return feats, sol, ms


def run_ranking(manifest: TaskManifest, cfg: SolverConfig | None = None) -> RankingReport:
    """Score every model in the manifest and assemble the ranked report."""
    cfg = cfg or SolverConfig()
    stack = _build_stack(manifest)
    warnings: list[str] = []

    threads = _thread_count(len(manifest.models))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda s: _score_one(s, stack, cfg), manifest.models))
    else:
        results = [_score_one(s, stack, cfg) for s in manifest.models]

    entries = []
    for spec, (feats, sol, ms) in zip(manifest.models, results):
        if feats.n < feats.d:
            warnings.append(
                f"model {spec.model_id!r}: fewer samples ({feats.n}) than features "
                f"({feats.d}); ridge keeps the system solvable"
            )
        entries.append(RankingEntry(spec.model_id, -sol.score, sol.iters, ms))
    if stack.n < stack.k:
        warnings.append(f"fewer samples ({stack.n}) than oracles ({stack.k})")

    entries.sort(key=lambda e: (-e.t_score, e.model_id))

    metrics: dict[str, float] = {}
    if manifest.ground_truth_path is not None:
        truth = dict(read_ground_truth(manifest.ground_truth_path))
        missing = [e.model_id for e in entries if e.model_id not in truth]
        if missing:
            raise InputError(
                f"ground truth {manifest.ground_truth_path} is missing models: {missing}"
            )
        if len(entries) < 2:
            warnings.append("M < 2: metrics skipped")
        else:
            pairs = [ScorePair(e.model_id, e.t_score, truth[e.model_id]) for e in entries]
            metrics["kendall_tau"] = kendall_tau(pairs)
            metrics["weighted_kendall_tau"] = weighted_kendall_tau(pairs)
            for name, fn in (("pearson", pearson), ("weighted_pearson", weighted_pearson)):
                try:
                    metrics[name] = fn(pairs)
                except ZeroVarianceError as exc:
                    warnings.append(f"{name}: {exc}")
            metrics["rel_at_1"] = rel_at_k(pairs, 1)
            if len(pairs) >= 3:
                metrics["rel_at_3"] = rel_at_k(pairs, 3)

    return RankingReport(
        task_name=manifest.task_name,
        entries=entries,
        metrics=metrics,
        config=cfg,
        warnings=warnings,
    )


def run_benchmark(
    manifest: TaskManifest,
    cfg_pair: tuple[SolverConfig, SolverConfig] | None = None,
) -> dict:
    """Run both solvers on identical inputs and report timings and score deltas.

    Purely a reporting tool: nothing is asserted about which solver wins.
    """
    if cfg_pair is None:
        cfg_pair = (
            SolverConfig(algorithm="pgd", tol=1e-8, max_outer_iters=200),
            SolverConfig(algorithm="fast"),
        )
    cfg_a, cfg_b = cfg_pair
    stack = _build_stack(manifest)
    rows = []
    for spec in manifest.models:
        feats = FeatureMatrix(read_npy(spec.features_path))
        row: dict = {"model_id": spec.model_id}
        scores = {}
        for cfg in (cfg_a, cfg_b):
            start = time.perf_counter()
            sol = solve(feats, stack, cfg)
            ms = (time.perf_counter() - start) * 1e3
            row[cfg.algorithm] = {
                "score": sol.score,
                "iters": sol.iters,
                "wall_clock_ms": ms,
            }
            scores[cfg.algorithm] = sol.score
        a, b = scores[cfg_a.algorithm], scores[cfg_b.algorithm]
        row["rel_score_delta"] = abs(a - b) / max(abs(a), abs(b), 1e-30)
        rows.append(row)
    return {
        "schema_version": SCHEMA_VERSION,
        "task_name": manifest.task_name,
        "config_a": _config_dict(cfg_a),
        "config_b": _config_dict(cfg_b),
        "models": rows,
    }
