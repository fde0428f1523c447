"""
Mapa de borde del objeto en movimiento: gradiente de color por superpíxeles,
gradiente del flujo óptico y fusión temporal recursiva
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from config import get_config_value
from core.socket_types import FIELD, FRAME, require_same_shape
from opb.optical_flow import FlowField, optical_flow
from opb.superpixels import SuperpixelLabeling, slic_superpixels
from utils.imaging.filters import (central_gradient, gradient_magnitude, neighborhood_min,
                                   rescale_by_max)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OpbParams:
    """
    Parámetros del extractor de bordes.

    theta=None activa el umbral adaptativo theta_scale * percentil(m).
    """
    theta: Optional[float] = None
    theta_scale: float = 0.1
    theta_percentile: float = 99.0
    alpha: float = 0.75
    mu: float = 0.5
    lam: float = 0.5
    sigma: float = 0.3
    superpixel_count: int = 100
    compactness: float = 10.0
    slic_iterations: int = 10
    flow_iterations: int = 100
    flow_smoothness: float = 0.1
    flow_levels: int = 3
    flow_warps: int = 2
    seed: int = 0

    def __post_init__(self):
        if self.theta is not None and self.theta < 0:
            raise ValueError(f"theta debe ser >= 0: {self.theta}")
        if self.alpha <= 0:
            raise ValueError(f"alpha debe ser positivo: {self.alpha}")
        if self.mu < 0 or self.lam < 0 or self.sigma < 0:
            raise ValueError(f"mu, lambda y sigma deben ser >= 0: {self}")
        if self.superpixel_count < 1:
            raise ValueError(f"superpixel_count debe ser >= 1: {self.superpixel_count}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'OpbParams':
        values = dict(data)
        if 'lambda' in values:
            values['lam'] = values.pop('lambda')
        known = {k: v for k, v in values.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_config(cls, source: dict = None) -> 'OpbParams':
        return cls.from_dict(get_config_value('opb', {}, source))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['lambda'] = data.pop('lam')
        return data


# ===========================================
# COMPONENTES
# ===========================================

def color_gradient(sp: SuperpixelLabeling) -> np.ndarray:
    """
    Norma de las 6 derivadas centrales de la imagen de color medio,
    reescalada por su máximo.
    """
    image = sp.mean_color_image()
    total = np.zeros(sp.labels.shape, dtype=np.float64)
    for ch in range(image.shape[2]):
        gy, gx = central_gradient(image[:, :, ch])
        total += gx * gx + gy * gy
    return rescale_by_max(np.sqrt(total))


def flow_gradient_raw(flow: FlowField) -> np.ndarray:
    """m = sqrt(|grad u|^2 + |grad v|^2) sin umbral"""
    ogx = gradient_magnitude(flow.u)
    ogy = gradient_magnitude(flow.v)
    return np.sqrt(ogx * ogx + ogy * ogy)


def resolve_theta(flow: FlowField, p: OpbParams) -> float:
    """Umbral fijo si se configuró; si no, fracción del percentil de m"""
    if p.theta is not None:
        return float(p.theta)
    return p.theta_scale * float(np.percentile(flow_gradient_raw(flow), p.theta_percentile))


def flow_gradient_magnitude(flow: FlowField, theta: float) -> np.ndarray:
    """Magnitud del gradiente del flujo; se anula donde m <= theta"""
    if theta < 0:
        raise ValueError(f"theta debe ser >= 0: {theta}")
    m = flow_gradient_raw(flow)
    return np.where(m > theta, m, 0.0)


def fuse_boundary(cg: np.ndarray, m: np.ndarray, prev_b: Optional[np.ndarray],
                  p: OpbParams) -> np.ndarray:
    """
    b = cg * (1 - exp(-alpha * m)).

    Con mapa previo: donde prev_b > sigma, mu * prev_b + lambda * b * w, con w
    el mínimo 3x3 del gradiente de prev_b reescalado por su máximo. En el
    resto, b. Resultado recortado a [0, 1].
    """
    cg = FIELD.ensure(cg, "cg")
    m = FIELD.ensure(m, "m")
    require_same_shape(cg, m, "fuse_boundary")
    base = cg * (1.0 - np.exp(-p.alpha * m))

    if prev_b is None:
        return np.clip(base, 0.0, 1.0)

    prev_b = FIELD.ensure(prev_b, "prev_b")
    require_same_shape(cg, prev_b, "fuse_boundary")
    weight = neighborhood_min(rescale_by_max(gradient_magnitude(prev_b)), size=3)
    recursive = p.mu * prev_b + p.lam * base * weight
    fused = np.where(prev_b > p.sigma, recursive, base)
    return np.clip(fused, 0.0, 1.0)


# ===========================================
# PIPELINE COMPLETO
# ===========================================

def opb_pipeline(prev: np.ndarray, cur: np.ndarray, prev_b: Optional[np.ndarray],
                 p: OpbParams) -> np.ndarray:
    """Superpíxeles + flujo + fusión para el par (prev, cur)"""
    prev = FRAME.ensure(prev, "prev")
    cur = FRAME.ensure(cur, "cur")
    require_same_shape(prev, cur, "opb_pipeline")

    sp = slic_superpixels(cur, p.superpixel_count, p.compactness, p.seed, p.slic_iterations)
    cg = color_gradient(sp)
    flow = optical_flow(prev, cur, p.flow_iterations, p.flow_smoothness,
                        p.flow_levels, p.flow_warps)
    m = flow_gradient_magnitude(flow, resolve_theta(flow, p))
    return fuse_boundary(cg, m, prev_b, p)


def boundary_sequence(frames: List[np.ndarray], p: OpbParams) -> List[np.ndarray]:
    """
    Bordes de los pares (i-1, i) de un vídeo con la recursión encadenada.
    El elemento k corresponde al fotograma k + 1.
    """
    boundaries: List[np.ndarray] = []
    prev_b = None
    for prev, cur in zip(frames, frames[1:]):
        prev_b = opb_pipeline(prev, cur, prev_b, p)
        boundaries.append(prev_b)
    return boundaries
