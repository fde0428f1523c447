"""
Métricas entre distribuciones: CC, SIM y EMD exacta
"""

import logging

import numpy as np
from scipy import sparse
from scipy.optimize import linprog
from scipy.spatial.distance import cdist

from core.socket_types import FIELD, require_same_shape
from utils.imaging.filters import box_downsample

logger = logging.getLogger(__name__)


class TransportError(RuntimeError):
    """El solver de transporte no encontró el óptimo"""


def _pair(pred: np.ndarray, gt: np.ndarray, label: str):
    pred = FIELD.ensure(pred, "predicción")
    gt = FIELD.ensure(gt, "densidad")
    require_same_shape(pred, gt, label)
    return pred, gt


def _unit_mass(field: np.ndarray, label: str) -> np.ndarray:
    if field.min() < 0:
        raise ValueError(f"{label}: valores negativos")
    total = field.sum()
    if total <= 0:
        raise ValueError(f"{label}: masa total nula")
    return field / total


def cc(pred: np.ndarray, gt_density: np.ndarray) -> float:
    """Correlación de Pearson; 0 si alguno de los mapas es constante"""
    pred, gt = _pair(pred, gt_density, "cc")
    if np.ptp(pred) == 0 or np.ptp(gt) == 0:
        return 0.0
    a = pred - pred.mean()
    b = gt - gt.mean()
    value = np.sum(a * b) / np.sqrt(np.sum(a * a) * np.sum(b * b))
    return float(np.clip(value, -1.0, 1.0))


def sim(pred: np.ndarray, gt_density: np.ndarray) -> float:
    """Suma de mínimos de los dos mapas normalizados a masa 1"""
    pred, gt = _pair(pred, gt_density, "sim")
    return float(np.minimum(_unit_mass(pred, "predicción"), _unit_mass(gt, "densidad")).sum())


# ===========================================
# EMD
# ===========================================

def _cell_coordinates(grid: int) -> np.ndarray:
    rows, cols = np.indices((grid, grid))
    return np.stack([rows.ravel(), cols.ravel()], axis=1).astype(np.float64)


def transport_cost(supply: np.ndarray, demand: np.ndarray) -> float:
    """
    Coste mínimo de transporte entre dos histogramas grid x grid de masa 1
    con distancia euclídea entre celdas. Las celdas vacías no entran al
    problema lineal.
    """
    if supply.shape != demand.shape or supply.ndim != 2:
        raise ValueError(f"Histogramas incompatibles: {supply.shape} vs {demand.shape}")
    if np.array_equal(supply, demand):
        return 0.0

    coords = _cell_coordinates(supply.shape[0])
    src = np.flatnonzero(supply.ravel() > 0)
    dst = np.flatnonzero(demand.ravel() > 0)
    n_src, n_dst = len(src), len(dst)
    cost = cdist(coords[src], coords[dst]).ravel()

    # Variable k = i * n_dst + j; la última restricción de destino es redundante
    var = np.arange(n_src * n_dst)
    row_idx = np.concatenate([var // n_dst, n_src + var % n_dst])
    keep = row_idx < n_src + n_dst - 1
    col_idx = np.concatenate([var, var])
    a_eq = sparse.csr_matrix(
        (np.ones(keep.sum()), (row_idx[keep], col_idx[keep])),
        shape=(n_src + n_dst - 1, n_src * n_dst),
    )
    b_eq = np.concatenate([supply.ravel()[src], demand.ravel()[dst][:-1]])

    result = linprog(cost, A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method='highs')
    if result.status != 0:
        raise TransportError(f"Transporte sin solución óptima: {result.message}")
    return float(max(result.fun, 0.0))


def emd(pred: np.ndarray, gt_density: np.ndarray, grid: int = 16) -> float:
    """
    Distancia del transportista entre ambos mapas reducidos por bloques a
    grid x grid (lado limitado por el mapa) y normalizados a masa 1.
    """
    pred, gt = _pair(pred, gt_density, "emd")
    if grid < 1:
        raise ValueError(f"grid debe ser positivo: {grid}")
    side = min(grid, *pred.shape)
    if side < grid:
        logger.debug(f"EMD: rejilla {grid} reducida a {side} para un mapa {pred.shape}")
    supply = _unit_mass(box_downsample(pred, side), "predicción")
    demand = _unit_mass(box_downsample(gt, side), "densidad")
    return transport_cost(supply, demand)
