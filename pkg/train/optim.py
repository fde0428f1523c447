"""
SGD con momento y decaimiento de pesos
"""

from typing import Dict

import numpy as np

from net.network import ParamStore
from train.train_config import TrainConfig


def sgd_step(params: ParamStore, grads: Dict[str, np.ndarray], cfg: TrainConfig) -> ParamStore:
    """
    v <- momentum * v - lr * (g + weight_decay * w); w <- w + v.
    Solo se actualizan los parámetros presentes en grads.
    """
    for name, grad in grads.items():
        if name not in params:
            raise KeyError(f"Gradiente para parámetro inexistente: {name}")
        weight = params.values[name]
        if grad.shape != weight.shape:
            raise ValueError(f"{name}: gradiente {grad.shape} frente a parámetro {weight.shape}")
        velocity = (cfg.momentum * params.velocity[name]
                    - cfg.learning_rate * (grad + cfg.weight_decay * weight))
        params.velocity[name] = velocity
        params.values[name] = weight + velocity
    return params
