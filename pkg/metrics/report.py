"""
Informe de métricas por fotograma y promedios por vídeo y conjunto
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from config import get_config_value
from core.socket_types import MASK, require_same_shape
from fixmap.gaze import GazeSample, ScreenMeta, VideoMeta
from fixmap.ground_truth import fixation_points, fixations_by_frame
from metrics.curves import CurveData, binary_from_density, combine_curves, pr_roc_curves
from metrics.distribution import cc, emd, sim
from metrics.fixation_metrics import (FixationSet, Point, nss, pool_excluding,
                                      sample_shuffled_negatives, shuffled_auc)
from utils.seeding import make_rng

logger = logging.getLogger(__name__)

METRIC_NAMES = ("s_auc", "nss", "cc", "sim", "emd")


@dataclass(frozen=True)
class EvaluationConfig:
    emd_grid: int = 16
    negatives_per_positive: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.emd_grid < 1:
            raise ValueError(f"emd_grid debe ser positivo: {self.emd_grid}")
        if self.negatives_per_positive < 1:
            raise ValueError(f"negatives_per_positive debe ser positivo: {self.negatives_per_positive}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'EvaluationConfig':
        defaults = cls()
        return cls(
            emd_grid=int(data.get('emd_grid', defaults.emd_grid)),
            negatives_per_positive=int(data.get('negatives_per_positive',
                                                defaults.negatives_per_positive)),
            seed=int(data.get('seed', defaults.seed)),
        )

    @classmethod
    def from_config(cls, source: dict = None) -> 'EvaluationConfig':
        return cls.from_dict(get_config_value('metrics', {}, source))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class MetricReport:
    s_auc: float
    nss: float
    cc: float
    sim: float
    emd: float
    curves: CurveData

    def scores(self) -> Dict[str, float]:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.scores(), curves=self.curves.to_dict())


def evaluate(pred: np.ndarray, gt_density: np.ndarray, gt_binary: np.ndarray,
             fixations: FixationSet, negatives: FixationSet,
             cfg: EvaluationConfig = None) -> MetricReport:
    """Las cinco métricas y las curvas PR/ROC de un fotograma"""
    cfg = cfg or EvaluationConfig()
    require_same_shape(np.asarray(pred), np.asarray(gt_density), "evaluate")
    require_same_shape(np.asarray(pred), MASK.ensure(gt_binary, "gt_binary"), "evaluate")
    return MetricReport(
        s_auc=shuffled_auc(pred, fixations, negatives),
        nss=nss(pred, fixations),
        cc=cc(pred, gt_density),
        sim=sim(pred, gt_density),
        emd=emd(pred, gt_density, cfg.emd_grid),
        curves=pr_roc_curves(pred, gt_binary),
    )


# ===========================================
# AGREGACIÓN
# ===========================================

def average_reports(reports: Sequence[MetricReport]) -> Dict[str, float]:
    """Media aritmética en el orden dado"""
    if not reports:
        raise ValueError("No hay informes que promediar")
    return {name: float(np.mean([getattr(r, name) for r in reports])) for name in METRIC_NAMES}


def average_scores(means: Sequence[Dict[str, float]]) -> Dict[str, float]:
    if not means:
        raise ValueError("No hay promedios que combinar")
    return {name: float(np.mean([m[name] for m in means])) for name in METRIC_NAMES}


def fixation_sets_from_gaze(samples: Sequence[GazeSample], videos: Dict[int, VideoMeta],
                            screen: ScreenMeta) -> Dict[int, Dict[int, FixationSet]]:
    """Píxeles fijados por (vídeo, fotograma) a partir del registro de mirada"""
    sets: Dict[int, Dict[int, FixationSet]] = {}
    for video_id in sorted(videos):
        meta = videos[video_id]
        grouped = fixations_by_frame(samples, meta, screen)
        sets[video_id] = {
            k: FixationSet(k, tuple(fixation_points(fixations, (meta.vr_y, meta.vr_x))))
            for k, fixations in sorted(grouped.items())
        }
    return sets


@dataclass
class FrameEvaluation:
    video_id: int
    frame_index: int
    report: MetricReport

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.report.scores(), video_id=self.video_id, frame_index=self.frame_index)


def evaluate_video(video_id: int, preds: Sequence[np.ndarray], gt_maps: Sequence[np.ndarray],
                   fixation_sets: Dict[int, FixationSet],
                   pool: List[Tuple[Tuple[int, int], Point]],
                   cfg: EvaluationConfig) -> List[FrameEvaluation]:
    """
    Evalúa los fotogramas de un vídeo con fijaciones. Los negativos del sAUC
    salen del conjunto de fijaciones de los demás fotogramas del conjunto
    de datos, con una semilla por (vídeo, fotograma).
    """
    if len(preds) != len(gt_maps):
        raise ValueError(
            f"Vídeo {video_id}: {len(preds)} predicciones para {len(gt_maps)} mapas de referencia"
        )
    results = []
    for k, (pred, gt) in enumerate(zip(preds, gt_maps)):
        fixations = fixation_sets.get(k)
        gt_binary = binary_from_density(gt)
        if fixations is None or not len(fixations) or gt_binary.all() or not gt_binary.any():
            logger.warning(f"Vídeo {video_id}, fotograma {k}: sin fijaciones evaluables, omitido")
            continue
        others = pool_excluding(pool, (video_id, k), gt.shape)
        rng = make_rng(cfg.seed, f"negatives/{video_id}/{k}")
        negatives = sample_shuffled_negatives(others, cfg.negatives_per_positive * len(fixations),
                                              rng, frame_index=k)
        report = evaluate(pred, gt, gt_binary, fixations, negatives, cfg)
        results.append(FrameEvaluation(video_id, k, report))
    logger.info(f"Vídeo {video_id}: {len(results)} fotogramas evaluados")
    return results


def summarize(per_video: Dict[int, List[FrameEvaluation]]) -> Dict[str, Any]:
    """
    Media por fotograma dentro de cada vídeo y después media entre vídeos,
    recorriendo los vídeos en orden de identificador.
    """
    video_means = {}
    for video_id in sorted(per_video):
        frames = per_video[video_id]
        if frames:
            video_means[video_id] = average_reports([f.report for f in frames])
    if not video_means:
        raise ValueError("Ningún fotograma evaluable")

    curves = combine_curves(f.report.curves for vid in sorted(per_video) for f in per_video[vid])
    return {
        'per_frame': [f.to_dict() for vid in sorted(per_video) for f in per_video[vid]],
        'per_video': {str(vid): means for vid, means in video_means.items()},
        'mean': average_scores(list(video_means.values())),
        'curves': curves,
    }

