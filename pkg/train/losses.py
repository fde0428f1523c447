"""
Funciones de pérdida de las dos etapas
"""

from typing import Tuple

import numpy as np

from core.socket_types import FIELD, require_same_shape

# Recorte de P antes de los logaritmos
PROB_EPS = 1e-7


def _check(p: np.ndarray, g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    p = FIELD.ensure(p, "P")
    g = FIELD.ensure(g, "G")
    require_same_shape(p, g, "pérdida")
    return p, g


def loss_l1(p: np.ndarray, g: np.ndarray) -> Tuple[float, np.ndarray]:
    """1/2 * sum((G - P)^2) y su gradiente P - G"""
    p, g = _check(p, g)
    diff = p - g
    return 0.5 * float(np.sum(diff * diff)), diff


def log_likelihood_sum(p: np.ndarray, g: np.ndarray) -> float:
    """sum(G log P + (1 - G) log(1 - P)) con P recortada; es <= 0"""
    p, g = _check(p, g)
    pc = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    return float(np.sum(g * np.log(pc) + (1.0 - g) * np.log1p(-pc)))


def loss_l2(p: np.ndarray, g: np.ndarray, eta: float) -> Tuple[float, np.ndarray]:
    """
    Término cuadrático más eta veces la entropía cruzada binaria
    -sum(G log P + (1 - G) log(1 - P)), mínima en P = G.
    """
    if eta < 0:
        raise ValueError(f"eta debe ser >= 0: {eta}")
    value, grad = loss_l1(p, g)
    if eta == 0:
        return value, grad

    p, g = _check(p, g)
    pc = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    cross_entropy = -log_likelihood_sum(p, g)
    inside = (p > PROB_EPS) & (p < 1.0 - PROB_EPS)
    ce_grad = np.where(inside, (pc - g) / (pc * (1.0 - pc)), 0.0)
    return value + eta * cross_entropy, grad + eta * ce_grad
