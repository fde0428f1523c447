"""
Transferencia del tronco convolucional entre variantes
"""

import logging
from typing import Dict, List

import numpy as np

from net.network import NetworkSpec, ParamStore, bias_name, init_weight, weight_name

logger = logging.getLogger(__name__)


def trunk_names(spec: NetworkSpec) -> List[str]:
    """Nombres de pesos y sesgos de las 13 convoluciones"""
    names = []
    for layer in spec.conv_layers:
        names.extend([weight_name(layer), bias_name(layer)])
    return names


def trunk_snapshot(spec: NetworkSpec, params: ParamStore) -> Dict[str, np.ndarray]:
    return {name: params[name].copy() for name in trunk_names(spec)}


def transfer_params(src_params: ParamStore, src_spec: NetworkSpec, dst_spec: NetworkSpec,
                    rng: np.random.Generator) -> ParamStore:
    """
    Copia las convoluciones compatibles; la primera conv de 3 a 4 canales
    recibe los canales RGB y un cuarto canal a cero. Las deconvoluciones
    se inicializan de nuevo con la distribución gaussiana.
    """
    src_layers = {layer.name: layer for layer in src_spec.conv_layers}
    values: Dict[str, np.ndarray] = {}
    mismatched = []

    for index, layer in enumerate(dst_spec.param_layers):
        w_name, b_name = weight_name(layer), bias_name(layer)
        if layer.kind == "deconv":
            values[w_name] = init_weight(layer, rng)
            values[b_name] = np.zeros(layer.out_channels, dtype=np.float64)
            continue

        source = src_layers.get(layer.name)
        if source is None:
            mismatched.append(f"{layer.name} (ausente en {src_spec.variant})")
            continue
        src_w = src_params[w_name]
        dst_shape = layer.weight_shape()

        if src_w.shape == dst_shape:
            values[w_name] = src_w.copy()
        elif (index == 0 and src_w.shape[0] == dst_shape[0] and src_w.shape[2:] == dst_shape[2:]
              and src_w.shape[1] == 3 and dst_shape[1] == 4):
            widened = np.zeros(dst_shape, dtype=np.float64)
            widened[:, :3] = src_w
            values[w_name] = widened
        else:
            mismatched.append(f"{layer.name} {src_w.shape} -> {dst_shape}")
            continue
        values[b_name] = src_params[b_name].copy()

    if mismatched:
        raise ValueError(
            f"Tronco incompatible {src_spec.variant} -> {dst_spec.variant}: " + ", ".join(mismatched)
        )

    logger.info(f"Tronco transferido {src_spec.variant} -> {dst_spec.variant}")
    return ParamStore(values)
