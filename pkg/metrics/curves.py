"""
Curvas PR y ROC con umbrales enteros 0..255

Las curvas se construyen a partir de conteos por umbral, de modo que varias
imágenes pueden combinarse sumando conteos antes de formar las tasas.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List

import numpy as np
from scipy.integrate import trapezoid

from core.socket_types import FIELD, MASK, require_same_shape

logger = logging.getLogger(__name__)

LEVELS = 256
THRESHOLDS = np.arange(LEVELS)
CURVE_HEADER = ("threshold", "precision", "tpr", "fpr")


def to_eight_bit(pred: np.ndarray) -> np.ndarray:
    """Mapa en [0, 1] a niveles 0..255; un uint8 se devuelve tal cual"""
    pred = np.asarray(pred)
    if pred.dtype == np.uint8:
        return pred
    pred = FIELD.ensure(pred, "predicción")
    return np.floor(np.clip(pred, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def binary_from_density(gt_density: np.ndarray) -> np.ndarray:
    """Un píxel es primer plano si alguna gaussiana lo cubre"""
    return FIELD.ensure(gt_density, "densidad") > 0


@dataclass(frozen=True, eq=False)
class CurveData:
    """
    Conteos por umbral t (predicción >= t) y las tasas derivadas.
    true_positive[t] y false_positive[t] son no crecientes en t.
    """
    true_positive: np.ndarray
    false_positive: np.ndarray
    positives: int
    negatives: int

    def __post_init__(self):
        if self.true_positive.shape != (LEVELS,) or self.false_positive.shape != (LEVELS,):
            raise ValueError("Las curvas requieren 256 conteos por umbral")
        if self.positives <= 0 or self.negatives <= 0:
            raise ValueError(
                f"Se requiere primer plano y fondo: {self.positives} positivos, "
                f"{self.negatives} negativos"
            )

    @property
    def tpr(self) -> np.ndarray:
        return self.true_positive / self.positives

    @property
    def fpr(self) -> np.ndarray:
        return self.false_positive / self.negatives

    @property
    def precision(self) -> np.ndarray:
        predicted = self.true_positive + self.false_positive
        out = np.ones(LEVELS, dtype=np.float64)
        nonempty = predicted > 0
        out[nonempty] = self.true_positive[nonempty] / predicted[nonempty]
        return out

    def rows(self) -> List[tuple]:
        """Filas threshold,precision,tpr,fpr para CSV"""
        precision, tpr, fpr = self.precision, self.tpr, self.fpr
        return [(int(t), float(precision[t]), float(tpr[t]), float(fpr[t])) for t in THRESHOLDS]

    def to_dict(self) -> Dict[str, object]:
        return {
            'true_positive': self.true_positive.tolist(),
            'false_positive': self.false_positive.tolist(),
            'positives': self.positives,
            'negatives': self.negatives,
        }


def _counts_at_or_above(values: np.ndarray) -> np.ndarray:
    histogram = np.bincount(values.ravel(), minlength=LEVELS).astype(np.int64)
    return np.cumsum(histogram[::-1])[::-1]


def pr_roc_curves(pred: np.ndarray, gt_binary: np.ndarray) -> CurveData:
    """
    Binariza pred >= t para cada t en 0..255 y cuenta aciertos sobre el
    primer plano y el fondo de gt_binary.
    """
    pred = to_eight_bit(pred)
    gt_binary = MASK.ensure(gt_binary, "gt_binary")
    require_same_shape(pred, gt_binary, "pr_roc_curves")

    positives = int(gt_binary.sum())
    negatives = int(gt_binary.size - positives)
    if positives == 0 or negatives == 0:
        raise ValueError("gt_binary debe contener primer plano y fondo")

    return CurveData(
        true_positive=_counts_at_or_above(pred[gt_binary]),
        false_positive=_counts_at_or_above(pred[~gt_binary]),
        positives=positives,
        negatives=negatives,
    )


def combine_curves(curves: Iterable[CurveData]) -> CurveData:
    """Suma los conteos de varias imágenes antes de formar las tasas"""
    curves = list(curves)
    if not curves:
        raise ValueError("No hay curvas que combinar")
    return CurveData(
        true_positive=np.sum([c.true_positive for c in curves], axis=0),
        false_positive=np.sum([c.false_positive for c in curves], axis=0),
        positives=sum(c.positives for c in curves),
        negatives=sum(c.negatives for c in curves),
    )


def roc_auc(curve: CurveData) -> float:
    """Área trapezoidal bajo la ROC cerrada en (0, 0) y (1, 1)"""
    fpr = np.concatenate(([0.0], curve.fpr[::-1], [1.0]))
    tpr = np.concatenate(([0.0], curve.tpr[::-1], [1.0]))
    return float(trapezoid(tpr, fpr))
