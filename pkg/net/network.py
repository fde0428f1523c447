"""
Especificación de las variantes SGF, almacén de parámetros y
forward/backward de la red completa
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from config import get_config_value
from core.socket_types import FIELD, require_same_shape
from net import layers

logger = logging.getLogger(__name__)

VARIANTS = ("SGF1", "SGF2", "SGF3", "SGFE")

# Capas conv por bloque del frente tipo VGG
BLOCK_DEPTHS = (2, 2, 3, 3, 3)

# Strides de la pila de deconvoluciones; el producto es siempre 32
DECONV_STRIDES = {
    "SGF1": (4, 8),
    "SGF2": (2, 4, 4),
    "SGF3": (2, 2, 2, 4),
    "SGFE": (2, 4, 4),
}

CONV_KINDS = ("conv", "deconv")

# Recorte del borde antes de pasarlo a logit en la capa de máximo
BOUNDARY_EPS = 1e-6


@dataclass(frozen=True)
class LayerSpec:
    """Una capa: tipo, nombre y los hiperparámetros que le corresponden"""
    name: str
    kind: str
    in_channels: int = 0
    out_channels: int = 0
    kernel: int = 1
    stride: int = 1
    pad: int = 0
    crop: int = 0
    out_side: Optional[int] = None
    aux_tag: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("conv", "relu", "maxpool", "deconv", "sigmoid", "eltwise_max"):
            raise ValueError(f"Tipo de capa desconocido: {self.kind}")
        if self.kernel < 1 or self.stride < 1:
            raise ValueError(f"{self.name}: kernel y stride deben ser >= 1")
        if self.kind in CONV_KINDS and (self.out_channels < 1 or self.in_channels < 1):
            raise ValueError(f"{self.name}: número de canales inválido")

    @property
    def has_params(self) -> bool:
        return self.kind in CONV_KINDS

    def weight_shape(self) -> Tuple[int, int, int, int]:
        if self.kind == "conv":
            return (self.out_channels, self.in_channels, self.kernel, self.kernel)
        return (self.in_channels, self.out_channels, self.kernel, self.kernel)


@dataclass(frozen=True)
class NetworkScale:
    """Lado de entrada (cuadrado) y anchura de cada bloque conv"""
    input_side: int = 64
    widths: Tuple[int, ...] = (8, 16, 32, 32, 32)

    def __post_init__(self):
        object.__setattr__(self, 'widths', tuple(int(w) for w in self.widths))
        if self.input_side < 1:
            raise ValueError(f"input_side debe ser >= 1: {self.input_side}")
        if len(self.widths) != len(BLOCK_DEPTHS) or min(self.widths) < 1:
            raise ValueError(f"Se requieren {len(BLOCK_DEPTHS)} anchuras positivas: {self.widths}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NetworkScale':
        return cls(input_side=int(data.get('input_side', 64)),
                   widths=tuple(data.get('widths', (8, 16, 32, 32, 32))))

    @classmethod
    def from_config(cls, source: dict = None) -> 'NetworkScale':
        return cls.from_dict(get_config_value('net', {}, source))

    def to_dict(self) -> Dict[str, Any]:
        return {'input_side': self.input_side, 'widths': list(self.widths)}


@dataclass(frozen=True)
class NetworkSpec:
    variant: str
    input_channels: int
    layers: Tuple[LayerSpec, ...]
    scale: NetworkScale

    @property
    def param_layers(self) -> List[LayerSpec]:
        return [layer for layer in self.layers if layer.has_params]

    @property
    def conv_layers(self) -> List[LayerSpec]:
        return [layer for layer in self.layers if layer.kind == "conv"]

    @property
    def deconv_layers(self) -> List[LayerSpec]:
        return [layer for layer in self.layers if layer.kind == "deconv"]

    @property
    def uses_boundary(self) -> bool:
        return any(layer.kind == "eltwise_max" for layer in self.layers)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'variant': self.variant,
            'input_channels': self.input_channels,
            'scale': self.scale.to_dict(),
            'layers': [asdict(layer) for layer in self.layers],
        }


# ===========================================
# CONSTRUCCIÓN DE VARIANTES
# ===========================================

def build_sgf(variant: str, scale: NetworkScale = None) -> NetworkSpec:
    """
    Frente de 13 convoluciones (5 bloques con max pooling) y pila de
    deconvoluciones de núcleo 2*stride hasta el tamaño de entrada.
    """
    if variant not in DECONV_STRIDES:
        raise KeyError(f"Variante desconocida: {variant}")
    scale = scale or NetworkScale()
    input_channels = 4 if variant == "SGFE" else 3

    specs: List[LayerSpec] = []
    channels = input_channels
    side = scale.input_side
    for block, (depth, width) in enumerate(zip(BLOCK_DEPTHS, scale.widths), start=1):
        for k in range(1, depth + 1):
            specs.append(LayerSpec(f"conv{block}_{k}", "conv", channels, width, kernel=3, pad=1))
            specs.append(LayerSpec(f"relu{block}_{k}", "relu"))
            channels = width
        specs.append(LayerSpec(f"pool{block}", "maxpool", kernel=2, stride=2))
        side = layers.pool_out_size(side, 2, 2)

    strides = DECONV_STRIDES[variant]
    for n, stride in enumerate(strides, start=1):
        name = f"deconv{n}"
        kernel = 2 * stride
        full = layers.deconv_full_size(side, kernel, stride)
        if n < len(strides):
            crop = stride // 2
            out_channels = scale.widths[1]
            specs.append(LayerSpec(name, "deconv", channels, out_channels, kernel, stride, crop=crop))
            specs.append(LayerSpec(f"relu_{name}", "relu"))
            side = full - 2 * crop
            channels = out_channels
        else:
            if full < scale.input_side:
                raise ValueError(
                    f"{name}: salida completa {full} menor que la entrada {scale.input_side}"
                )
            crop = (full - scale.input_side) // 2
            specs.append(LayerSpec(name, "deconv", channels, 1, kernel, stride, crop=crop,
                                   out_side=scale.input_side))

    if variant == "SGFE":
        specs.append(LayerSpec("boundary_max", "eltwise_max", aux_tag="boundary"))
    specs.append(LayerSpec("sigmoid", "sigmoid"))

    logger.debug(f"{variant}: {len(specs)} capas, lado mínimo {side}")
    return NetworkSpec(variant=variant, input_channels=input_channels,
                       layers=tuple(specs), scale=scale)


# ===========================================
# PARÁMETROS
# ===========================================

def weight_name(layer: LayerSpec) -> str:
    return f"{layer.name}.weight"


def bias_name(layer: LayerSpec) -> str:
    return f"{layer.name}.bias"


class ParamStore:
    """
    Parámetros con nombre (peso y sesgo por capa) y buffers de momento.
    El orden de inserción es el orden de la red y el del archivo binario.
    """

    def __init__(self, values: Dict[str, np.ndarray] = None,
                 velocity: Dict[str, np.ndarray] = None):
        self.values: Dict[str, np.ndarray] = dict(values or {})
        self.velocity: Dict[str, np.ndarray] = {
            name: np.zeros_like(value) for name, value in self.values.items()
        }
        if velocity:
            for name, buf in velocity.items():
                if name not in self.values:
                    raise KeyError(f"Buffer de momento sin parámetro: {name}")
                self.velocity[name] = np.array(buf, dtype=np.float64)

    @classmethod
    def initialize(cls, spec: NetworkSpec, rng: np.random.Generator) -> 'ParamStore':
        """Conv: N(0, sqrt(2/fan_in)); deconv: N(0, 0.01); sesgos a cero"""
        values = {}
        for layer in spec.param_layers:
            values[weight_name(layer)] = init_weight(layer, rng)
            values[bias_name(layer)] = np.zeros(layer.out_channels, dtype=np.float64)
        return cls(values)

    def names(self) -> List[str]:
        return list(self.values)

    def __getitem__(self, name: str) -> np.ndarray:
        if name not in self.values:
            raise KeyError(f"Parámetro no encontrado: {name}")
        return self.values[name]

    def __setitem__(self, name: str, value: np.ndarray):
        value = np.array(value, dtype=np.float64)
        if name in self.values and self.values[name].shape != value.shape:
            raise ValueError(f"{name}: forma {value.shape} distinta de {self.values[name].shape}")
        self.values[name] = value
        if name not in self.velocity or self.velocity[name].shape != value.shape:
            self.velocity[name] = np.zeros_like(value)

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def copy(self) -> 'ParamStore':
        return ParamStore({n: v.copy() for n, v in self.values.items()},
                          {n: v.copy() for n, v in self.velocity.items()})

    def check_against(self, spec: NetworkSpec):
        """Lanza ValueError si faltan parámetros o sus formas no cuadran"""
        for layer in spec.param_layers:
            expected = {weight_name(layer): layer.weight_shape(),
                        bias_name(layer): (layer.out_channels,)}
            for name, shape in expected.items():
                if name not in self.values:
                    raise ValueError(f"Falta el parámetro {name} para {spec.variant}")
                if self.values[name].shape != shape:
                    raise ValueError(f"{name}: forma {self.values[name].shape}, se esperaba {shape}")


def init_weight(layer: LayerSpec, rng: np.random.Generator) -> np.ndarray:
    shape = layer.weight_shape()
    if layer.kind == "conv":
        fan_in = layer.in_channels * layer.kernel * layer.kernel
        return rng.normal(0.0, np.sqrt(2.0 / fan_in), size=shape)
    return rng.normal(0.0, 0.01, size=shape)


# ===========================================
# FORWARD / BACKWARD
# ===========================================

@dataclass
class ForwardCache:
    """Entradas de cada capa y datos auxiliares para el backward"""
    inputs: List[np.ndarray] = field(default_factory=list)
    extras: List[Any] = field(default_factory=list)
    trunk: Optional[np.ndarray] = None
    pre_sigmoid: Optional[np.ndarray] = None
    prediction: Optional[np.ndarray] = None


def _check_input(spec: NetworkSpec, x: np.ndarray, aux: Optional[np.ndarray]) -> Optional[np.ndarray]:
    side = spec.scale.input_side
    expected = (spec.input_channels, side, side)
    if x.shape != expected:
        raise ValueError(f"{spec.variant}: entrada {x.shape}, se esperaba {expected}")
    if spec.uses_boundary:
        if aux is None:
            raise ValueError(f"{spec.variant} requiere el mapa de borde auxiliar")
        aux = FIELD.ensure(aux, "boundary")
        if aux.shape != (side, side):
            raise ValueError(f"Mapa de borde {aux.shape}, se esperaba {(side, side)}")
        return aux
    if aux is not None:
        raise ValueError(f"{spec.variant} no admite mapa de borde auxiliar")
    return None


def forward(spec: NetworkSpec, params: ParamStore, x: np.ndarray,
            aux: Optional[np.ndarray] = None) -> Tuple[np.ndarray, ForwardCache]:
    """
    Predicción (alto, ancho) en (0, 1) y la caché de activaciones.

    En SGFE el máximo se toma contra logit(B), de modo que la predicción es
    max(sigmoid(tronco), B) con B recortado a [BOUNDARY_EPS, 1 - BOUNDARY_EPS].
    """
    x = np.asarray(x, dtype=np.float64)
    aux = _check_input(spec, x, aux)
    cache = ForwardCache()

    for layer in spec.layers:
        cache.inputs.append(x)
        extra = None
        if layer.kind == "conv":
            x = layers.conv_forward(x, params[weight_name(layer)], params[bias_name(layer)],
                                    layer.stride, layer.pad)
        elif layer.kind == "deconv":
            out_shape = (layer.out_side, layer.out_side) if layer.out_side else None
            x = layers.deconv_forward(x, params[weight_name(layer)], params[bias_name(layer)],
                                      layer.stride, layer.crop, out_shape)
            if layer.out_side:
                cache.trunk = x
        elif layer.kind == "relu":
            x = layers.relu_forward(x)
        elif layer.kind == "maxpool":
            x, extra = layers.maxpool_forward(x, layer.kernel, layer.stride)
        elif layer.kind == "eltwise_max":
            x, extra = layers.eltwise_max_forward(x, layers.boundary_logit(aux, BOUNDARY_EPS)[None])
        elif layer.kind == "sigmoid":
            cache.pre_sigmoid = x
            x = layers.sigmoid_forward(x)
            extra = x
        cache.extras.append(extra)

    cache.prediction = x[0]
    return cache.prediction, cache


def backward(spec: NetworkSpec, params: ParamStore, cache: ForwardCache,
             output_gradient: np.ndarray) -> Dict[str, np.ndarray]:
    """Gradiente de cada parámetro dado dL/dpredicción"""
    if cache.prediction is None:
        raise ValueError("Caché vacía: ejecutar forward antes de backward")
    require_same_shape(cache.prediction, np.asarray(output_gradient), "output_gradient")
    dy = np.asarray(output_gradient, dtype=np.float64)[None]
    grads: Dict[str, np.ndarray] = {}

    for layer, x, extra in zip(reversed(spec.layers), reversed(cache.inputs), reversed(cache.extras)):
        if layer.kind == "sigmoid":
            dy = layers.sigmoid_backward(extra, dy)
        elif layer.kind == "eltwise_max":
            dy, _ = layers.eltwise_max_backward(extra, dy)
        elif layer.kind == "relu":
            dy = layers.relu_backward(x, dy)
        elif layer.kind == "maxpool":
            dy = layers.maxpool_backward(x.shape, extra, layer.kernel, layer.stride, dy)
        elif layer.kind == "deconv":
            dy, dw, db = layers.deconv_backward(x, params[weight_name(layer)], layer.stride,
                                                layer.crop, dy)
            grads[weight_name(layer)], grads[bias_name(layer)] = dw, db
        elif layer.kind == "conv":
            dy, dw, db = layers.conv_backward(x, params[weight_name(layer)], layer.stride,
                                              layer.pad, dy)
            grads[weight_name(layer)], grads[bias_name(layer)] = dw, db

    return {name: grads[name] for name in params.names() if name in grads}
