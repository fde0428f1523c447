"""
Modelo gaussiano de fijación y acumulación por fotograma
"""

import math
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Any, Dict, Iterable, Tuple

import numpy as np

from config import get_config_value
from core.socket_types import FIELD
from fixmap.gaze import FrameFixation


@dataclass(frozen=True)
class GaussianSplatParams:
    """Ventana W (píxeles), amplitud alpha y decaimiento beta"""
    window_w: int = 35
    alpha: float = 1.0
    beta: float = 3.0

    def __post_init__(self):
        if self.window_w < 1 or self.alpha <= 0 or self.beta <= 0:
            raise ValueError(f"Parámetros gaussianos inválidos: {self}")

    @classmethod
    def from_config(cls, source: dict = None) -> 'GaussianSplatParams':
        section = get_config_value('fixmap', {}, source)
        return cls(
            window_w=int(section.get('window_w', 35)),
            alpha=float(section.get('alpha', 1.0)),
            beta=float(section.get('beta', 3.0)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@lru_cache(maxsize=32)
def _kernel(window_w: int, alpha: float, beta: float) -> np.ndarray:
    """Núcleo (2W+1)^2 con soporte circular de radio W"""
    offsets = np.arange(-window_w, window_w + 1, dtype=np.float64)
    d2 = offsets[:, None] ** 2 + offsets[None, :] ** 2
    kernel = (alpha / (math.pi * window_w)) * np.exp(-beta * d2 / window_w ** 2)
    kernel[d2 > window_w ** 2] = 0.0
    kernel.setflags(write=False)
    return kernel


def _center_pixel(center: FrameFixation) -> Tuple[int, int]:
    """(fila, columna) redondeando al píxel más cercano, mitades hacia arriba"""
    return int(math.floor(center.y + 0.5)), int(math.floor(center.x + 0.5))


def _add_splat(field: np.ndarray, row: int, col: int, p: GaussianSplatParams):
    """Suma el núcleo centrado en (row, col), recortado a los bordes"""
    height, width = field.shape
    w = p.window_w
    r0, r1 = max(row - w, 0), min(row + w + 1, height)
    c0, c1 = max(col - w, 0), min(col + w + 1, width)
    if r0 >= r1 or c0 >= c1:
        return
    kernel = _kernel(p.window_w, p.alpha, p.beta)
    field[r0:r1, c0:c1] += kernel[r0 - (row - w):r1 - (row - w), c0 - (col - w):c1 - (col - w)]


def _check_dims(dims: Tuple[int, int]) -> Tuple[int, int]:
    height, width = int(dims[0]), int(dims[1])
    if height <= 0 or width <= 0:
        raise ValueError(f"Dimensiones inválidas: {dims}")
    return height, width


def gaussian_splat(center: FrameFixation, p: GaussianSplatParams,
                   dims: Tuple[int, int]) -> np.ndarray:
    """Campo alto x ancho con una única gaussiana de fijación"""
    field = np.zeros(_check_dims(dims), dtype=np.float64)
    row, col = _center_pixel(center)
    _add_splat(field, row, col, p)
    return field


def accumulate_fixation_map(fixations: Iterable[FrameFixation], p: GaussianSplatParams,
                            dims: Tuple[int, int]) -> np.ndarray:
    """
    Suma de gaussianas de todas las fijaciones de un mismo fotograma.
    El orden de suma es fijo: por sujeto y, dentro de cada sujeto, por registro.
    """
    fixations = list(fixations)
    field = np.zeros(_check_dims(dims), dtype=np.float64)
    if not fixations:
        return field

    frames = {fx.frame_index for fx in fixations}
    if len(frames) > 1:
        raise ValueError(f"Fijaciones de varios fotogramas mezcladas: {sorted(frames)}")

    for fx in sorted(fixations, key=lambda f: f.subject_id):
        row, col = _center_pixel(fx)
        _add_splat(field, row, col, p)
    return field


def quantize_map(f: np.ndarray) -> np.ndarray:
    """Reescala [min, max] a [0, 255] con redondeo de mitades hacia arriba"""
    f = FIELD.ensure(f, "mapa")
    low, high = float(f.min()), float(f.max())
    if high <= low:
        return np.zeros(f.shape, dtype=np.uint8)
    scaled = (f - low) * (255.0 / (high - low))
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)
