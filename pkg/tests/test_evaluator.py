import json

import numpy as np
import pytest

from pxplay.arena import ScriptedPolicy
from pxplay.evaluator import (
    CLIP,
    confusion,
    export_report,
    mean_and_halfwidth,
    read_pgm,
    read_ppm,
    run_series,
    saliency,
    top_n_accuracy,
    write_ppm,
)
from pxplay.models import build, init_params
from pxplay.models.arch import ArchitectureSpec, LayerDef, RELU, conv

from test_trainer import tiny_spec, toy_manifest

F32 = np.float32


def constant_class_params(spec, favored: int):
    """Zero weights except a final-layer bias spike: predicts one class always."""
    params = {k: np.zeros_like(v) for k, v in init_params(spec, 0).items()}
    last = len(spec.head) - 1
    params[f"head.{last}.b"][favored] = 1.0
    return params


class TestTopNAccuracy:
    def test_constant_predictor_on_single_class_data(self, tmp_path):
        manifest = toy_manifest(tmp_path, n_train=1, n_val=1, ticks=24, classes=1)
        spec = tiny_spec()
        params = constant_class_params(spec, favored=0)
        assert top_n_accuracy(spec, params, manifest, 1) == 1.0

    def test_nesting(self, tmp_path):
        manifest = toy_manifest(tmp_path)
        spec = tiny_spec()
        params = init_params(spec, seed=3)
        accs = [top_n_accuracy(spec, params, manifest, n) for n in (1, 3, 5)]
        assert accs[0] <= accs[1] <= accs[2]

    def test_monotone_transform_invariance(self, tmp_path):
        # doubling all logits leaves rankings unchanged
        manifest = toy_manifest(tmp_path)
        spec = tiny_spec()
        params = init_params(spec, seed=4)
        doubled = dict(params)
        last = len(spec.head) - 1
        doubled[f"head.{last}.w"] = params[f"head.{last}.w"] * F32(2.0)
        doubled[f"head.{last}.b"] = params[f"head.{last}.b"] * F32(2.0)
        for n in (1, 3):
            assert top_n_accuracy(spec, params, manifest, n) == pytest.approx(
                top_n_accuracy(spec, doubled, manifest, n)
            )


class TestConfusion:
    def test_constant_predictor_fills_one_column(self, tmp_path):
        manifest = toy_manifest(tmp_path)
        spec = tiny_spec()
        cm = confusion(spec, constant_class_params(spec, favored=2), manifest)
        assert cm.counts[:, 2].sum() == cm.counts.sum()

    def test_row_sums_match_histogram(self, tmp_path):
        from pxplay.datapipe import class_histogram

        manifest = toy_manifest(tmp_path)
        spec = tiny_spec()
        cm = confusion(spec, init_params(spec, 1), manifest, role="val")
        counts, _ = class_histogram(manifest, "val")
        assert np.array_equal(cm.counts.sum(axis=1), counts)

    def test_normalized_rows_sum_to_one(self, tmp_path):
        manifest = toy_manifest(tmp_path)
        spec = tiny_spec()
        cm = confusion(spec, init_params(spec, 2), manifest)
        norm = cm.normalized()
        nonempty = cm.counts.sum(axis=1) > 0
        assert np.allclose(norm[nonempty].sum(axis=1), 1.0, atol=1e-9)
        assert np.all(norm[~nonempty] == 0)


class TestSeries:
    def test_zero_variance(self):
        mean, hw = mean_and_halfwidth([100.0, 100.0, 100.0])
        assert mean == 100.0 and hw == 0.0

    def test_hand_formula(self):
        mean, hw = mean_and_halfwidth([80.0, 120.0])
        assert mean == 100.0
        assert hw == pytest.approx(1.96 * 28.284271 / np.sqrt(2), abs=1e-3)

    def test_single_game(self):
        mean, hw = mean_and_halfwidth([42.0])
        assert (mean, hw) == (42.0, 0.0)

    def test_series_deterministic_and_consistent(self):
        def factory(seed):
            return ScriptedPolicy(0)

        a = run_series(factory, cpu_level=3, games=3, seed=5, tick_limit=300)
        b = run_series(factory, cpu_level=3, games=3, seed=5, tick_limit=300)
        assert a.to_dict() == b.to_dict()
        assert a.games == 3
        assert a.p1_mean == pytest.approx(np.mean(a.p1_damage))


class TestSaliency:
    def test_zero_model_maps_are_all_128(self):
        spec, params = build("compact", "late_integration", 10, seed=0)
        params = {k: np.zeros_like(v) for k, v in params.items()}
        stack = np.random.default_rng(0).uniform(-1, 1, (4, 64, 64, 3)).astype(F32)
        maps = saliency(spec, params, stack, class_id=3)
        assert maps.shape == (4, 64, 64, 3)
        assert np.all(maps == 128.0)

    def test_clip_endpoints_map_to_0_and_256(self):
        # a linear single-frame model with O(1) weights saturates every pixel
        spec = ArchitectureSpec(
            preset="compact", variant="single_frame", input_hw=(8, 8),
            frame_count=1, class_count=4,
            tower=(conv(1, 2, stride=1, pad=0), RELU),
            head=(LayerDef("fc", units=4),),
        )
        params = init_params(spec, seed=1)
        params["tower.0.w"] = np.abs(params["tower.0.w"]) + F32(0.5)
        stack = np.abs(np.random.default_rng(2).uniform(0.5, 1, (1, 8, 8, 3))).astype(F32)
        maps = saliency(spec, params, stack, class_id=0)
        assert maps.max() == 256.0
        assert maps.min() == 0.0

    def test_range_always_within_bounds(self):
        spec, params = build("compact", "early_integration", 10, seed=5)
        stack = np.random.default_rng(3).uniform(-1, 1, (4, 64, 64, 3)).astype(F32)
        maps = saliency(spec, params, stack, class_id=7)
        assert maps.min() >= 0.0 and maps.max() <= 256.0

    def test_clip_constant_matches_exp(self):
        assert CLIP == pytest.approx(np.exp(-9.0))


class TestReport:
    def test_empty_metrics_valid_json(self, tmp_path):
        doc = export_report(tmp_path, metrics={})
        on_disk = json.loads((tmp_path / "report.json").read_text())
        assert on_disk == doc == {"metrics": {}}

    def test_confusion_round_trip(self, tmp_path):
        from pxplay.evaluator.metrics import ConfusionMatrix

        counts = np.array([[5, 1], [2, 8]], dtype=np.int64)
        cm = ConfusionMatrix(counts=counts, priors=np.array([0.4, 0.6]))
        export_report(tmp_path, metrics={"top1": 0.5}, confusion=cm)
        doc = json.loads((tmp_path / "report.json").read_text())
        assert np.array_equal(np.array(doc["confusion"]["counts"]), counts)
        heat, maxval = read_pgm(tmp_path / "confusion_counts.pgm")
        assert maxval == 65535
        assert heat.shape == (2, 2)
        assert heat[1, 1] == 65535  # the peak count

    def test_saliency_ppm_round_trip_16bit(self, tmp_path):
        maps = np.zeros((2, 4, 4, 3), dtype=F32)
        maps[0] = 256.0
        maps[1] = 128.0
        export_report(tmp_path, metrics={}, saliency_maps=[("t0", maps)])
        img, maxval = read_ppm(tmp_path / "saliency_t0_f0.ppm")
        assert maxval == 256
        assert np.all(img == 256)
        img1, _ = read_ppm(tmp_path / "saliency_t0_f1.ppm")
        assert np.all(img1 == 128)

    def test_ppm_rejects_out_of_range(self, tmp_path):
        with pytest.raises(Exception):
            write_ppm(tmp_path / "bad.ppm", np.full((2, 2, 3), 300.0), maxval=256)
