"""
Filtros de imagen sobre campos escalares
"""

from typing import Tuple

import numpy as np
from PIL import Image
from scipy import ndimage


def central_gradient(field: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Derivadas (d/dfila, d/dcolumna) por diferencias centrales.
    En los bordes se usan diferencias de un lado (numpy.gradient).
    Ejes de longitud 1 tienen derivada nula.
    """
    field = np.asarray(field, dtype=np.float64)
    grads = []
    for axis in (0, 1):
        if field.shape[axis] < 2:
            grads.append(np.zeros_like(field))
        else:
            grads.append(np.gradient(field, axis=axis))
    return grads[0], grads[1]


def gradient_magnitude(field: np.ndarray) -> np.ndarray:
    """Norma euclídea del gradiente central"""
    gy, gx = central_gradient(field)
    return np.sqrt(gx * gx + gy * gy)


def rescale_by_max(field: np.ndarray) -> np.ndarray:
    """Divide por el máximo; un campo nulo sigue nulo"""
    peak = float(np.max(field)) if field.size else 0.0
    if peak <= 0.0:
        return np.zeros_like(field, dtype=np.float64)
    return field / peak


def neighborhood_min(field: np.ndarray, size: int = 3) -> np.ndarray:
    """Mínimo en la vecindad size x size (bordes replicados)"""
    return ndimage.minimum_filter(field, size=size, mode='nearest')


def box_downsample(field: np.ndarray, grid: int) -> np.ndarray:
    """
    Suma por bloques a una rejilla grid x grid.
    Cada píxel cae en exactamente una celda aunque las dimensiones no sean divisibles.
    """
    field = np.asarray(field, dtype=np.float64)
    h, w = field.shape
    rows = (np.arange(h) * grid) // h
    cols = (np.arange(w) * grid) // w
    out = np.zeros((grid, grid), dtype=np.float64)
    np.add.at(out, (rows[:, None], cols[None, :]), field)
    return out


def resize_field(field: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Redimensiona un campo real (bilineal, Pillow modo F)"""
    field = np.asarray(field, dtype=np.float64)
    if field.shape == tuple(shape):
        return field.copy()
    image = Image.fromarray(field.astype(np.float32))
    resized = image.resize((shape[1], shape[0]), resample=Image.Resampling.BILINEAR)
    return np.asarray(resized, dtype=np.float64)


def resize_frame(frame: np.ndarray, shape: Tuple[int, int]) -> np.ndarray:
    """Redimensiona un fotograma RGB canal a canal"""
    if frame.shape[:2] == tuple(shape):
        return np.asarray(frame, dtype=np.float64).copy()
    channels = [resize_field(frame[:, :, c], shape) for c in range(frame.shape[2])]
    return np.clip(np.stack(channels, axis=2), 0.0, 1.0)


def smooth(field: np.ndarray, sigma: float) -> np.ndarray:
    """Suavizado gaussiano"""
    if sigma <= 0:
        return np.asarray(field, dtype=np.float64).copy()
    return ndimage.gaussian_filter(np.asarray(field, dtype=np.float64), sigma=sigma, mode='nearest')
