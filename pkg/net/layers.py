"""
Capas de la red con forward y backward exactos.

Todos los tensores de activación tienen forma (canales, alto, ancho).
Pesos de convolución: (C_out, C_in, K, K). Pesos de deconvolución: (C_in, C_out, K, K),
de modo que un mismo arreglo sirve a ambas operaciones adjuntas.
"""

from typing import Tuple

import numpy as np
from scipy.special import expit, logit

from core.socket_types import FIELD, FRAME, TENSOR3D, require_same_shape


def _out_size(size: int, kernel: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - kernel) // stride + 1


# ===========================================
# CONVOLUCIÓN
# ===========================================

def conv_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int = 1,
                 pad: int = 0) -> np.ndarray:
    """Correlación cruzada con sesgo"""
    x = TENSOR3D.ensure(x, "conv x")
    if w.ndim != 4 or w.shape[1] != x.shape[0]:
        raise ValueError(f"conv: canales incompatibles, x {x.shape} w {w.shape}")
    if b.shape != (w.shape[0],):
        raise ValueError(f"conv: sesgo {b.shape} no coincide con {w.shape[0]} salidas")
    if stride < 1 or pad < 0:
        raise ValueError(f"conv: stride {stride} / pad {pad} inválidos")

    _, kh, kw = w.shape[1:]
    h_out = _out_size(x.shape[1], kh, stride, pad)
    w_out = _out_size(x.shape[2], kw, stride, pad)
    if h_out < 1 or w_out < 1:
        raise ValueError(f"conv: salida vacía para entrada {x.shape} y núcleo {w.shape}")

    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad))) if pad else x
    y = np.zeros((w.shape[0], h_out, w_out), dtype=np.float64)
    for i in range(kh):
        for j in range(kw):
            patch = xp[:, i:i + stride * h_out:stride, j:j + stride * w_out:stride]
            y += np.tensordot(w[:, :, i, j], patch, axes=(1, 0))
    y += b[:, None, None]
    return y


def conv_backward(x: np.ndarray, w: np.ndarray, stride: int, pad: int,
                  dy: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradientes (dx, dw, db) de conv_forward"""
    _, kh, kw = w.shape[1:]
    h_out, w_out = dy.shape[1:]
    xp = np.pad(x, ((0, 0), (pad, pad), (pad, pad))) if pad else x
    dxp = np.zeros_like(xp)
    dw = np.zeros_like(w)
    for i in range(kh):
        for j in range(kw):
            rows = slice(i, i + stride * h_out, stride)
            cols = slice(j, j + stride * w_out, stride)
            dw[:, :, i, j] = np.tensordot(dy, xp[:, rows, cols], axes=([1, 2], [1, 2]))
            dxp[:, rows, cols] += np.tensordot(w[:, :, i, j], dy, axes=(0, 0))
    db = dy.sum(axis=(1, 2))
    dx = dxp[:, pad:pad + x.shape[1], pad:pad + x.shape[2]] if pad else dxp
    return dx, dw, db


# ===========================================
# DECONVOLUCIÓN (CONVOLUCIÓN TRASPUESTA)
# ===========================================

def deconv_full_size(size: int, kernel: int, stride: int) -> int:
    return (size - 1) * stride + kernel


def _deconv_target(x_shape: Tuple[int, ...], w: np.ndarray, stride: int, crop: int,
                   out_shape: Tuple[int, int] = None) -> Tuple[int, int, int, int]:
    full_h = deconv_full_size(x_shape[1], w.shape[2], stride)
    full_w = deconv_full_size(x_shape[2], w.shape[3], stride)
    if out_shape is None:
        out_shape = (full_h - 2 * crop, full_w - 2 * crop)
    out_h, out_w = out_shape
    if crop < 0 or out_h < 1 or out_w < 1 or crop + out_h > full_h or crop + out_w > full_w:
        raise ValueError(
            f"deconv: tamaño objetivo {out_shape} con recorte {crop} "
            f"inalcanzable desde salida completa {(full_h, full_w)}"
        )
    return full_h, full_w, out_h, out_w


def deconv_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray, stride: int, crop: int = 0,
                   out_shape: Tuple[int, int] = None) -> np.ndarray:
    """
    Dispersión-acumulación seguida de un recorte que empieza en `crop`.
    Sin out_shape el recorte es simétrico.
    """
    x = TENSOR3D.ensure(x, "deconv x")
    if w.ndim != 4 or w.shape[0] != x.shape[0]:
        raise ValueError(f"deconv: canales incompatibles, x {x.shape} w {w.shape}")
    if b.shape != (w.shape[1],):
        raise ValueError(f"deconv: sesgo {b.shape} no coincide con {w.shape[1]} salidas")
    if stride < 1:
        raise ValueError(f"deconv: stride inválido {stride}")

    full_h, full_w, out_h, out_w = _deconv_target(x.shape, w, stride, crop, out_shape)
    h_in, w_in = x.shape[1:]
    full = np.zeros((w.shape[1], full_h, full_w), dtype=np.float64)
    for i in range(w.shape[2]):
        for j in range(w.shape[3]):
            full[:, i:i + stride * h_in:stride, j:j + stride * w_in:stride] += \
                np.tensordot(w[:, :, i, j], x, axes=(0, 0))
    y = full[:, crop:crop + out_h, crop:crop + out_w]
    return y + b[:, None, None]


def deconv_backward(x: np.ndarray, w: np.ndarray, stride: int, crop: int,
                    dy: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradientes (dx, dw, db) de deconv_forward"""
    full_h, full_w, out_h, out_w = _deconv_target(x.shape, w, stride, crop, dy.shape[1:])
    dfull = np.zeros((w.shape[1], full_h, full_w), dtype=np.float64)
    dfull[:, crop:crop + out_h, crop:crop + out_w] = dy

    h_in, w_in = x.shape[1:]
    dx = np.zeros_like(x)
    dw = np.zeros_like(w)
    for i in range(w.shape[2]):
        for j in range(w.shape[3]):
            window = dfull[:, i:i + stride * h_in:stride, j:j + stride * w_in:stride]
            dx += np.tensordot(w[:, :, i, j], window, axes=(1, 0))
            dw[:, :, i, j] = np.tensordot(x, window, axes=([1, 2], [1, 2]))
    db = dy.sum(axis=(1, 2))
    return dx, dw, db


# ===========================================
# MAX POOLING (MODO TECHO)
# ===========================================

def pool_out_size(size: int, kernel: int, stride: int) -> int:
    """Tamaño de salida redondeando hacia arriba; al menos 1"""
    return max(1, -(-(size - kernel) // stride) + 1)


def maxpool_forward(x: np.ndarray, kernel: int = 2, stride: int = 2) -> Tuple[np.ndarray, np.ndarray]:
    """
    Máximo por ventana; las ventanas del borde se completan con -inf.
    Devuelve también el índice ganador dentro de cada ventana (primero en empate).
    """
    x = TENSOR3D.ensure(x, "maxpool x")
    h_out = pool_out_size(x.shape[1], kernel, stride)
    w_out = pool_out_size(x.shape[2], kernel, stride)
    pad_h = (h_out - 1) * stride + kernel - x.shape[1]
    pad_w = (w_out - 1) * stride + kernel - x.shape[2]
    xp = np.pad(x, ((0, 0), (0, max(pad_h, 0)), (0, max(pad_w, 0))), constant_values=-np.inf)

    windows = np.stack([
        xp[:, i:i + stride * h_out:stride, j:j + stride * w_out:stride]
        for i in range(kernel) for j in range(kernel)
    ])
    argmax = np.argmax(windows, axis=0)
    y = np.take_along_axis(windows, argmax[None], axis=0)[0]
    return y, argmax


def maxpool_backward(x_shape: Tuple[int, int, int], argmax: np.ndarray, kernel: int,
                     stride: int, dy: np.ndarray) -> np.ndarray:
    """Envía cada gradiente a la posición ganadora de su ventana"""
    h_out, w_out = dy.shape[1:]
    full_h = max((h_out - 1) * stride + kernel, x_shape[1])
    full_w = max((w_out - 1) * stride + kernel, x_shape[2])
    dxp = np.zeros((x_shape[0], full_h, full_w), dtype=np.float64)
    for idx in range(kernel * kernel):
        i, j = divmod(idx, kernel)
        dxp[:, i:i + stride * h_out:stride, j:j + stride * w_out:stride] += np.where(argmax == idx, dy, 0.0)
    return dxp[:, :x_shape[1], :x_shape[2]]


# ===========================================
# ACTIVACIONES Y ELTWISE
# ===========================================

def relu_forward(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def relu_backward(x: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Derivada 0 en x == 0"""
    return np.where(x > 0, dy, 0.0)


def sigmoid_forward(x: np.ndarray) -> np.ndarray:
    return expit(x)


def sigmoid_backward(y: np.ndarray, dy: np.ndarray) -> np.ndarray:
    """Usa la salida y = sigmoid(x)"""
    return dy * y * (1.0 - y)


def eltwise_max_forward(a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Máximo punto a punto; mask es True donde gana a (incluidos empates)"""
    require_same_shape(a, b, "eltwise_max")
    mask = a >= b
    return np.where(mask, a, b), mask


def eltwise_max_backward(mask: np.ndarray, dy: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return np.where(mask, dy, 0.0), np.where(mask, 0.0, dy)


def boundary_logit(boundary: np.ndarray, eps: float) -> np.ndarray:
    """
    Lleva un mapa de borde en [0, 1] a la escala logit del tronco.
    Se recorta a [eps, 1 - eps]; un borde nulo queda muy por debajo de cualquier
    logit razonable del tronco.
    """
    return logit(np.clip(boundary, eps, 1.0 - eps))


# ===========================================
# ENTRADAS
# ===========================================

def frame_to_tensor(frame: np.ndarray) -> np.ndarray:
    """Fotograma alto x ancho x 3 a tensor (3, alto, ancho)"""
    frame = FRAME.ensure(frame, "frame")
    return np.ascontiguousarray(frame.transpose(2, 0, 1))


def assemble_sgfe_input(frame: np.ndarray, prev_saliency: np.ndarray) -> np.ndarray:
    """
    Tensor de 4 canales: RGB del fotograma actual y la saliencia previa
    como cuarto canal.
    """
    rgb = frame_to_tensor(frame)
    prev_saliency = FIELD.ensure(prev_saliency, "prev_saliency")
    if prev_saliency.shape != rgb.shape[1:]:
        raise ValueError(f"Saliencia previa {prev_saliency.shape} no coincide con {rgb.shape[1:]}")
    return np.concatenate([rgb, prev_saliency[None]], axis=0)
