"""
Flujo óptico denso Horn-Schunck con pirámide de imágenes y warping
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import ndimage

from core.socket_types import FRAME, require_same_shape
from utils.imaging.color_spaces import rgb_to_gray
from utils.imaging.filters import central_gradient, resize_field, smooth

logger = logging.getLogger(__name__)

# Núcleo de promediado de Horn-Schunck (centro excluido)
HS_AVERAGE = np.array([
    [1.0 / 12, 1.0 / 6, 1.0 / 12],
    [1.0 / 6, 0.0, 1.0 / 6],
    [1.0 / 12, 1.0 / 6, 1.0 / 12],
])

# Lado mínimo del nivel más grueso de la pirámide
MIN_LEVEL_SIDE = 8
PRESMOOTH_SIGMA = 1.0


@dataclass(frozen=True)
class FlowField:
    """Desplazamiento por píxel: u horizontal (columnas), v vertical (filas)"""
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        require_same_shape(self.u, self.v, "FlowField")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.v))):
            raise ValueError("FlowField con valores no finitos")

    @property
    def shape(self) -> Tuple[int, int]:
        return self.u.shape

    def magnitude(self) -> np.ndarray:
        return np.hypot(self.u, self.v)

    def max_norm(self) -> float:
        return float(self.magnitude().max())


def _build_pyramid(image: np.ndarray, levels: int) -> List[np.ndarray]:
    """Niveles de fino a grueso; cada nivel reduce a la mitad tras suavizar"""
    pyramid = [image]
    while len(pyramid) < levels:
        h, w = pyramid[-1].shape
        if min(h, w) // 2 < MIN_LEVEL_SIDE:
            break
        coarse = resize_field(smooth(pyramid[-1], PRESMOOTH_SIGMA), ((h + 1) // 2, (w + 1) // 2))
        pyramid.append(coarse)
    return pyramid


def _warp(image: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Muestrea image en (fila + v, columna + u) con interpolación bilineal"""
    rows, cols = np.indices(image.shape, dtype=np.float64)
    return ndimage.map_coordinates(image, [rows + v, cols + u], order=1, mode='nearest')


def _refine_level(prev: np.ndarray, cur: np.ndarray, u: np.ndarray, v: np.ndarray,
                  iterations: int, smoothness: float, warps: int) -> Tuple[np.ndarray, np.ndarray]:
    """Iteraciones de Horn-Schunck linealizadas alrededor del flujo actual"""
    alpha2 = smoothness * smoothness
    for _ in range(warps):
        warped = _warp(cur, u, v)
        gy0, gx0 = central_gradient(prev)
        gy1, gx1 = central_gradient(warped)
        ix = 0.5 * (gx0 + gx1)
        iy = 0.5 * (gy0 + gy1)
        it = warped - prev - ix * u - iy * v
        denom = alpha2 + ix * ix + iy * iy

        for _ in range(iterations):
            u_avg = ndimage.convolve(u, HS_AVERAGE, mode='nearest')
            v_avg = ndimage.convolve(v, HS_AVERAGE, mode='nearest')
            t = (ix * u_avg + iy * v_avg + it) / denom
            u = u_avg - ix * t
            v = v_avg - iy * t
    return u, v


def optical_flow(prev: np.ndarray, cur: np.ndarray, iterations: int = 100,
                 smoothness: float = 0.1, levels: int = 3, warps: int = 2) -> FlowField:
    """
    Flujo de prev a cur: un objeto que se mueve hacia la derecha da u > 0.

    Fotogramas idénticos producen flujo exactamente nulo.
    """
    prev = FRAME.ensure(prev, "prev")
    cur = FRAME.ensure(cur, "cur")
    require_same_shape(prev, cur, "optical_flow")
    if iterations < 1:
        raise ValueError(f"iterations debe ser >= 1: {iterations}")
    if smoothness <= 0:
        raise ValueError(f"smoothness debe ser positivo: {smoothness}")

    prev_pyr = _build_pyramid(smooth(rgb_to_gray(prev), PRESMOOTH_SIGMA), max(1, levels))
    cur_pyr = _build_pyramid(smooth(rgb_to_gray(cur), PRESMOOTH_SIGMA), max(1, levels))

    coarse = prev_pyr[-1].shape
    u = np.zeros(coarse, dtype=np.float64)
    v = np.zeros(coarse, dtype=np.float64)

    for level in range(len(prev_pyr) - 1, -1, -1):
        shape = prev_pyr[level].shape
        if u.shape != shape:
            ratio_r = shape[0] / u.shape[0]
            ratio_c = shape[1] / u.shape[1]
            u = resize_field(u, shape) * ratio_c
            v = resize_field(v, shape) * ratio_r
        u, v = _refine_level(prev_pyr[level], cur_pyr[level], u, v,
                             iterations, smoothness, warps)

    logger.debug(f"Flujo {prev.shape[:2]}: {len(prev_pyr)} niveles, |flujo|max={np.hypot(u, v).max():.3f}")
    return FlowField(u=u, v=v)
