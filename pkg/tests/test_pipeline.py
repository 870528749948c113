import json

import numpy as np
import pytest

from emms.errors import InputError, ShapeMismatchError
from emms.npyio import write_npy
from emms.pipeline import load_manifest, run_benchmark, run_ranking
from emms.solver import SolverConfig
from emms.synth import generate_model_suite
from emms.tabular import write_score_table


def _write_suite(tmp_path, seed, quality=(1.0, 0.5, 0.0), with_truth=True, n=60, d=6, l=3, k=2, sigma=None):
    sigma = sigma or (0.3,) + tuple(0.2 + 0.4 * j for j in range(k))
    task, models = generate_model_suite(
        len(quality), quality, n=n, d=d, l=l, k=k, sigma=sigma, seed=seed
    )
    flabels = []
    for j, s in enumerate(task.z.slices):
        name = f"fl{j}.npy"
        write_npy(tmp_path / name, s)
        flabels.append(name)
    entries = []
    truth = []
    for mid, feats, g in models:
        name = f"{mid}.npy"
        write_npy(tmp_path / name, feats.data)
        entries.append({"id": mid, "features": name})
        truth.append((mid, g))
    doc = {"task_name": f"suite{seed}", "models": entries, "flabels": flabels}
    if with_truth:
        write_score_table(tmp_path / "gt.csv", truth)
        doc["ground_truth"] = "gt.csv"
    manifest_path = tmp_path / "manifest.json"
    manifest_path.write_text(json.dumps(doc))
    return manifest_path


def _strip_timings(report_json: str) -> str:
    doc = json.loads(report_json)
    for entry in doc["entries"]:
        entry.pop("wall_clock_ms")
    return json.dumps(doc, sort_keys=True)


class TestRunRanking:
    def test_quality_order_recovered_with_perfect_tau(self, tmp_path):
        good = 0
        tau_ok = 0
        for seed in range(100):
            sub = tmp_path / f"s{seed}"
            sub.mkdir()
            manifest = load_manifest(_write_suite(sub, seed))
            report = run_ranking(manifest, SolverConfig())
            ids = [e.model_id for e in report.entries]
            if ids == ["model_00", "model_01", "model_02"]:
                good += 1
                if report.metrics["weighted_kendall_tau"] == 1.0:
                    tau_ok += 1
        assert good >= 95
        assert tau_ok == good

    def test_entries_sorted_by_score_descending(self, tmp_path):
        manifest = load_manifest(_write_suite(tmp_path, 3))
        report = run_ranking(manifest, SolverConfig())
        scores = [e.t_score for e in report.entries]
        assert scores == sorted(scores, reverse=True)

    def test_single_model_skips_metrics_with_warning(self, tmp_path):
        manifest = load_manifest(_write_suite(tmp_path, 4, quality=(0.8,)))
        report = run_ranking(manifest, SolverConfig())
        assert report.metrics == {}
        assert any("M < 2" in w for w in report.warnings)

    def test_mismatched_n_names_both_sides(self, tmp_path):
        _write_suite(tmp_path, 5)
        write_npy(tmp_path / "model_00.npy", np.ones((13, 6)))  # wrong row count
        manifest = load_manifest(tmp_path / "manifest.json")
        with pytest.raises(ShapeMismatchError) as err:
            run_ranking(manifest, SolverConfig())
        msg = str(err.value)
        assert "model_00" in msg and "label stack" in msg

    def test_report_deterministic_except_timings(self, tmp_path, monkeypatch):
        manifest = load_manifest(_write_suite(tmp_path, 6))
        first = run_ranking(manifest, SolverConfig()).to_json()
        second = run_ranking(manifest, SolverConfig()).to_json()
        assert _strip_timings(first) == _strip_timings(second)

        monkeypatch.setenv("EMMS_THREADS", "2")
        third = run_ranking(manifest, SolverConfig()).to_json()
        assert _strip_timings(first) == _strip_timings(third)

    def test_thin_feature_matrix_warns(self, tmp_path):
        manifest_path = _write_suite(tmp_path, 7, quality=(0.9, 0.1), n=4, d=6, l=2, k=2)
        report = run_ranking(load_manifest(manifest_path), SolverConfig())
        assert any("fewer samples" in w for w in report.warnings)

    def test_one_hot_manifest_path(self, tmp_path):
        rng = np.random.default_rng(8)
        labels = rng.integers(0, 3, size=30)
        onehot = np.zeros((30, 3))
        onehot[np.arange(30), labels] = 1.0
        feats = onehot @ rng.standard_normal((3, 5)) + 0.05 * rng.standard_normal((30, 5))
        write_npy(tmp_path / "m.npy", feats)
        (tmp_path / "labels.txt").write_text("\n".join(str(int(x)) for x in labels) + "\n")
        doc = {
            "task_name": "onehot",
            "models": [{"id": "m", "features": "m.npy"}],
            "one_hot": {"labels": "labels.txt", "classes": 3},
        }
        (tmp_path / "manifest.json").write_text(json.dumps(doc))
        report = run_ranking(load_manifest(tmp_path / "manifest.json"), SolverConfig())
        assert report.entries[0].t_score <= 0.0
        assert np.isfinite(report.entries[0].t_score)

    def test_schema_and_config_echo(self, tmp_path):
        manifest = load_manifest(_write_suite(tmp_path, 9))
        cfg = SolverConfig(algorithm="pgd", max_outer_iters=5, tol=1e-7)
        doc = json.loads(run_ranking(manifest, cfg).to_json())
        assert doc["schema_version"] == "1"
        assert doc["config"]["algorithm"] == "pgd"
        assert doc["config"]["max_outer_iters"] == 5
        assert doc["config"]["tol"] == 1e-7


class TestManifestValidation:
    def test_needs_models(self, tmp_path):
        (tmp_path / "m.json").write_text(json.dumps({"flabels": ["a.npy"]}))
        with pytest.raises(InputError):
            load_manifest(tmp_path / "m.json")

    def test_needs_labels_or_one_hot(self, tmp_path):
        (tmp_path / "m.json").write_text(
            json.dumps({"models": [{"id": "a", "features": "a.npy"}]})
        )
        with pytest.raises(InputError):
            load_manifest(tmp_path / "m.json")

    def test_rejects_both_label_sources(self, tmp_path):
        doc = {
            "models": [{"id": "a", "features": "a.npy"}],
            "flabels": ["z.npy"],
            "one_hot": {"labels": "l.txt", "classes": 2},
        }
        (tmp_path / "m.json").write_text(json.dumps(doc))
        with pytest.raises(InputError):
            load_manifest(tmp_path / "m.json")

    def test_ground_truth_must_cover_models(self, tmp_path):
        path = _write_suite(tmp_path, 10)
        write_score_table(tmp_path / "gt.csv", [("model_00", 1.0), ("other", 0.5), ("x", 0.2)])
        with pytest.raises(InputError):
            run_ranking(load_manifest(path), SolverConfig())


class TestRunBenchmark:
    def test_deterministic_scores_and_agreement(self, tmp_path):
        manifest = load_manifest(
            _write_suite(
                tmp_path, 11, quality=(1.0, 0.7), n=600, d=24, l=6, k=3,
                sigma=(0.3, 0.25, 0.35, 0.45),
            )
        )
        cfg_pair = (
            SolverConfig(algorithm="pgd", max_outer_iters=300, tol=1e-8),
            SolverConfig(algorithm="fast"),
        )
        first = run_benchmark(manifest, cfg_pair)
        second = run_benchmark(manifest, cfg_pair)
        for a, b in zip(first["models"], second["models"]):
            assert a["pgd"]["score"] == b["pgd"]["score"]
            assert a["fast"]["score"] == b["fast"]["score"]
            assert a["rel_score_delta"] <= 1e-3
