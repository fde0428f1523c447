"""
Métricas basadas en puntos de fijación: AUC barajado (sAUC) y NSS
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np
from scipy.stats import rankdata

from core.socket_types import FIELD

logger = logging.getLogger(__name__)

Point = Tuple[int, int]


@dataclass(frozen=True)
class FixationSet:
    """Píxeles (fila, columna) fijados en un fotograma"""
    frame_index: int
    points: Tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, 'points', tuple((int(r), int(c)) for r, c in self.points))
        if any(r < 0 or c < 0 for r, c in self.points):
            raise ValueError(f"Fotograma {self.frame_index}: coordenadas negativas")

    def __len__(self) -> int:
        return len(self.points)

    def check_bounds(self, shape: Tuple[int, int]):
        height, width = shape
        outside = [p for p in self.points if p[0] >= height or p[1] >= width]
        if outside:
            raise ValueError(
                f"Fotograma {self.frame_index}: {len(outside)} fijaciones fuera de {shape}"
            )

    def as_index(self) -> Tuple[np.ndarray, np.ndarray]:
        if not self.points:
            return np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp)
        rows, cols = zip(*self.points)
        return np.asarray(rows, dtype=np.intp), np.asarray(cols, dtype=np.intp)

    def to_dict(self) -> Dict[str, object]:
        return {'frame_index': self.frame_index, 'points': [list(p) for p in self.points]}


def _values_at(pred: np.ndarray, points: FixationSet, label: str) -> np.ndarray:
    if not len(points):
        raise ValueError(f"{label}: conjunto de puntos vacío")
    points.check_bounds(pred.shape)
    return pred[points.as_index()]


# ===========================================
# AUC BARAJADO
# ===========================================

def sample_shuffled_negatives(pool: Sequence[Point], count: int,
                              rng: np.random.Generator, frame_index: int = -1) -> FixationSet:
    """
    Extrae count coordenadas con reemplazo de un conjunto de fijaciones de
    otros fotogramas.
    """
    if count <= 0:
        raise ValueError(f"count debe ser positivo: {count}")
    if not pool:
        raise ValueError("No hay fijaciones de otros fotogramas para barajar")
    picks = rng.integers(0, len(pool), size=count)
    return FixationSet(frame_index, tuple(pool[i] for i in picks))


def shuffled_auc(pred: np.ndarray, fixations: FixationSet, negatives: FixationSet) -> float:
    """
    AUC de los valores en las fijaciones frente a los negativos barajados.
    Estadístico de Mann-Whitney por rangos; los empates cuentan la mitad.
    """
    pred = FIELD.ensure(pred, "predicción")
    positive = _values_at(pred, fixations, "fijaciones")
    negative = _values_at(pred, negatives, "negativos")

    ranks = rankdata(np.concatenate([positive, negative]), method='average')
    n_pos, n_neg = len(positive), len(negative)
    u_stat = ranks[:n_pos].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u_stat / (n_pos * n_neg))


# ===========================================
# NSS
# ===========================================

def nss(pred: np.ndarray, fixations: FixationSet) -> float:
    """Media del mapa estandarizado (desviación poblacional) en las fijaciones"""
    pred = FIELD.ensure(pred, "predicción")
    values = _values_at(pred, fixations, "fijaciones")
    if np.ptp(pred) == 0:
        return 0.0
    return float(np.mean((values - pred.mean()) / pred.std()))


def negative_pool(fixation_sets: Iterable[Tuple[object, FixationSet]]) -> List[Tuple[object, Point]]:
    """Aplana (clave, puntos) en una lista (clave, punto) en orden fijo"""
    return [(key, point) for key, fixations in fixation_sets for point in fixations.points]


def pool_excluding(pool: List[Tuple[object, Point]], key: object,
                   shape: Tuple[int, int]) -> List[Point]:
    """Puntos de otros fotogramas que caben en shape"""
    height, width = shape
    return [p for k, p in pool if k != key and p[0] < height and p[1] < width]
