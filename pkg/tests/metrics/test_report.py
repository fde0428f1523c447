"""
Pruebas del informe agregado de métricas
"""

import numpy as np
import pytest

from metrics.curves import binary_from_density, pr_roc_curves
from metrics.distribution import cc, emd, sim
from metrics.fixation_metrics import FixationSet, negative_pool, nss, shuffled_auc
from metrics.report import (EvaluationConfig, average_reports, evaluate, evaluate_video,
                            summarize)


def _density(center, shape=(16, 16), sigma=2.0):
    rows, cols = np.indices(shape)
    g = np.exp(-((rows - center[0]) ** 2 + (cols - center[1]) ** 2) / (2 * sigma ** 2))
    g[g < 1e-3] = 0.0
    return g


FIX = FixationSet(0, ((8, 8), (7, 8)))
NEG = FixationSet(0, ((1, 1), (14, 2), (3, 13), (12, 12), (8, 8)))
CFG = EvaluationConfig(emd_grid=8)


class TestEvaluate:

    def test_perfect_prediction(self):
        gt = _density((8, 8))
        report = evaluate(gt, gt, binary_from_density(gt), FIX, NEG, CFG)
        assert report.cc == pytest.approx(1.0)
        assert report.sim == pytest.approx(1.0)
        assert report.emd == 0.0
        assert report.nss > 0
        assert report.s_auc > 0.5

    def test_constant_prediction(self):
        gt = _density((8, 8))
        report = evaluate(np.full(gt.shape, 0.5), gt, binary_from_density(gt), FIX, NEG, CFG)
        assert report.cc == 0.0
        assert report.nss == 0.0
        assert report.s_auc == 0.5

    def test_fields_match_component_calls(self):
        rng = np.random.default_rng(0)
        pred = rng.random((16, 16))
        gt = _density((5, 9))
        gt_binary = binary_from_density(gt)
        report = evaluate(pred, gt, gt_binary, FIX, NEG, CFG)
        assert report.s_auc == shuffled_auc(pred, FIX, NEG)
        assert report.nss == nss(pred, FIX)
        assert report.cc == cc(pred, gt)
        assert report.sim == sim(pred, gt)
        assert report.emd == emd(pred, gt, 8)
        np.testing.assert_array_equal(report.curves.true_positive,
                                      pr_roc_curves(pred, gt_binary).true_positive)

    def test_ranges(self):
        rng = np.random.default_rng(1)
        gt = _density((4, 4))
        report = evaluate(rng.random((16, 16)), gt, binary_from_density(gt), FIX, NEG, CFG)
        assert 0 <= report.s_auc <= 1
        assert -1 <= report.cc <= 1
        assert 0 <= report.sim <= 1
        assert report.emd >= 0


class TestAggregation:

    def _video(self, video_id, centers):
        gts = [_density(c) for c in centers]
        sets = {k: FixationSet(k, (c,)) for k, c in enumerate(centers)}
        return gts, sets

    def test_per_video_then_dataset_mean(self):
        cfg = EvaluationConfig(emd_grid=4, negatives_per_positive=3, seed=2)
        videos = {0: self._video(0, [(4, 4), (5, 5), (6, 6)]), 1: self._video(1, [(10, 10)])}
        pool = negative_pool(((vid, k), fs) for vid, (_, sets) in videos.items()
                             for k, fs in sets.items())
        rng = np.random.default_rng(3)
        per_video = {}
        for vid, (gts, sets) in videos.items():
            preds = [np.clip(g + 0.1 * rng.random(g.shape), 0, 1) for g in gts]
            per_video[vid] = evaluate_video(vid, preds, gts, sets, pool, cfg)

        summary = summarize(per_video)
        assert len(summary['per_frame']) == 4
        v0 = average_reports([f.report for f in per_video[0]])
        v1 = average_reports([f.report for f in per_video[1]])
        assert summary['mean']['cc'] == pytest.approx((v0['cc'] + v1['cc']) / 2, abs=1e-15)

    def test_frames_without_fixations_are_skipped(self):
        gts, sets = self._video(0, [(4, 4), (9, 9)])
        del sets[1]
        pool = negative_pool([((5, 0), FixationSet(0, ((2, 2), (12, 3))))])
        out = evaluate_video(0, gts, gts, sets, pool, EvaluationConfig(emd_grid=4))
        assert [f.frame_index for f in out] == [0]

    def test_negatives_are_seeded(self):
        gts, sets = self._video(0, [(4, 4), (9, 9)])
        pool = negative_pool(((0, k), fs) for k, fs in sets.items())
        preds = [np.random.default_rng(k).random((16, 16)) for k in range(2)]
        cfg = EvaluationConfig(emd_grid=4, negatives_per_positive=5, seed=11)
        a = evaluate_video(0, preds, gts, sets, pool, cfg)
        b = evaluate_video(0, preds, gts, sets, pool, cfg)
        assert [f.report.s_auc for f in a] == [f.report.s_auc for f in b]

    def test_count_mismatch_rejected(self):
        gts, sets = self._video(0, [(4, 4)])
        with pytest.raises(ValueError):
            evaluate_video(0, [], gts, sets, [], EvaluationConfig())


def test_config_round_trip():
    cfg = EvaluationConfig(emd_grid=12, negatives_per_positive=7, seed=4)
    assert EvaluationConfig.from_dict(cfg.to_dict()) == cfg
    assert EvaluationConfig.from_config({'metrics': {'emd_grid': 6}}).emd_grid == 6
