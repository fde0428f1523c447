"""
Superpíxeles SLIC (sembrado en rejilla, distancia CIELAB + espacial)
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from core.socket_types import FRAME
from utils.imaging.color_spaces import rgb_to_lab
from utils.imaging.filters import gradient_magnitude

logger = logging.getLogger(__name__)

# Vecindad 4-conexa
FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


@dataclass(frozen=True)
class SuperpixelLabeling:
    """Etiquetas en [0, count) y color medio RGB de cada región"""
    labels: np.ndarray
    count: int
    mean_color: np.ndarray

    def mean_color_image(self) -> np.ndarray:
        """Cada píxel sustituido por el color medio de su superpíxel"""
        return self.mean_color[self.labels]


def _grid_shape(k: int, height: int, width: int) -> Tuple[int, int]:
    """Filas x columnas de semillas con producto cercano a k"""
    cols = max(1, min(width, int(round(math.sqrt(k * width / height)))))
    rows = max(1, min(height, int(round(k / cols))))
    return rows, cols


def _seed_centers(lab: np.ndarray, k: int) -> np.ndarray:
    """Semillas en rejilla desplazadas al mínimo gradiente 3x3 si es estrictamente menor"""
    height, width = lab.shape[:2]
    rows, cols = _grid_shape(k, height, width)
    grad = sum(gradient_magnitude(lab[:, :, c]) for c in range(3))

    centers = []
    for i in range(rows):
        for j in range(cols):
            r = int((i + 0.5) * height / rows)
            c = int((j + 0.5) * width / cols)
            best = (grad[r, c], r, c)
            for dr in (-1, 0, 1):
                for dc in (-1, 0, 1):
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < height and 0 <= cc < width and grad[rr, cc] < best[0]:
                        best = (grad[rr, cc], rr, cc)
            _, r, c = best
            centers.append([lab[r, c, 0], lab[r, c, 1], lab[r, c, 2], float(r), float(c)])
    return np.array(centers, dtype=np.float64)


def _assign(lab: np.ndarray, centers: np.ndarray, step: float, compactness: float,
            order: np.ndarray) -> np.ndarray:
    """Asignación local: cada centro explora una ventana 2S x 2S"""
    height, width = lab.shape[:2]
    labels = np.full((height, width), -1, dtype=np.int64)
    best = np.full((height, width), np.inf)
    radius = int(math.ceil(step))
    spatial_weight = (compactness / step) ** 2

    for idx in order:
        l, a, b, r, c = centers[idx]
        r0, r1 = max(int(r) - radius, 0), min(int(r) + radius + 1, height)
        c0, c1 = max(int(c) - radius, 0), min(int(c) + radius + 1, width)
        window = lab[r0:r1, c0:c1]
        dc2 = (window[:, :, 0] - l) ** 2 + (window[:, :, 1] - a) ** 2 + (window[:, :, 2] - b) ** 2
        rr = np.arange(r0, r1, dtype=np.float64)[:, None] - r
        cc = np.arange(c0, c1, dtype=np.float64)[None, :] - c
        dist = dc2 + (rr ** 2 + cc ** 2) * spatial_weight
        region = best[r0:r1, c0:c1]
        closer = dist < region
        region[closer] = dist[closer]
        labels[r0:r1, c0:c1][closer] = idx

    # Píxeles fuera de toda ventana: centro espacial más cercano
    orphans = labels < 0
    if np.any(orphans):
        pr, pc = np.nonzero(orphans)
        d2 = (pr[:, None] - centers[None, :, 3]) ** 2 + (pc[:, None] - centers[None, :, 4]) ** 2
        labels[pr, pc] = np.argmin(d2, axis=1)
    return labels


def _update_centers(lab: np.ndarray, labels: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Centros = medias de color y posición; los clusters vacíos conservan su centro"""
    n = centers.shape[0]
    flat = labels.ravel()
    counts = np.bincount(flat, minlength=n).astype(np.float64)
    rows, cols = np.indices(labels.shape)
    features = [lab[:, :, 0], lab[:, :, 1], lab[:, :, 2], rows, cols]
    updated = centers.copy()
    present = counts > 0
    for f, values in enumerate(features):
        sums = np.bincount(flat, weights=values.ravel().astype(np.float64), minlength=n)
        updated[present, f] = sums[present] / counts[present]
    return updated


def _enforce_connectivity(labels: np.ndarray, min_size: int) -> np.ndarray:
    """
    Cada etiqueta conserva su mayor componente 4-conexa (si no es diminuta);
    el resto se absorbe en la región vecina más frecuente.
    """
    result = labels.copy()
    largest_overall = (0, None)

    for value in np.unique(labels):
        components, n = ndimage.label(labels == value, structure=FOUR_CONNECTED)
        if n == 0:
            continue
        sizes = np.bincount(components.ravel())[1:]
        keep = int(np.argmax(sizes)) + 1
        if sizes[keep - 1] > largest_overall[0]:
            largest_overall = (int(sizes[keep - 1]), (value, keep, components))
        for comp in range(1, n + 1):
            if comp != keep or sizes[comp - 1] < min_size:
                result[components == comp] = -1

    # Nunca vaciar la imagen completa
    if np.all(result < 0) and largest_overall[1] is not None:
        value, keep, components = largest_overall[1]
        result[components == keep] = value

    while np.any(result < 0):
        holes, n = ndimage.label(result < 0, structure=FOUR_CONNECTED)
        progressed = False
        for hole in range(1, n + 1):
            mask = holes == hole
            ring = ndimage.binary_dilation(mask, structure=FOUR_CONNECTED) & ~mask
            neighbours = result[ring]
            neighbours = neighbours[neighbours >= 0]
            if neighbours.size == 0:
                continue
            values, counts = np.unique(neighbours, return_counts=True)
            result[mask] = values[np.argmax(counts)]
            progressed = True
        if not progressed:
            break

    return result


def _relabel_sequential(labels: np.ndarray) -> Tuple[np.ndarray, int]:
    values, inverse = np.unique(labels, return_inverse=True)
    return inverse.reshape(labels.shape).astype(np.int64), int(values.size)


def slic_superpixels(f: np.ndarray, k: int, compactness: float = 10.0, seed: int = 0,
                     iterations: int = 10) -> SuperpixelLabeling:
    """
    SLIC estándar sobre CIELAB.

    La semilla solo fija el orden de visita de los centros, que decide los
    empates de distancia; el resultado es determinista para una semilla dada.
    """
    f = FRAME.ensure(f, "frame")
    height, width = f.shape[:2]
    n_pixels = height * width
    if k < 1 or k > n_pixels:
        raise ValueError(f"Número de superpíxeles fuera de rango: k={k}, píxeles={n_pixels}")

    if k == 1:
        labels = np.zeros((height, width), dtype=np.int64)
        return SuperpixelLabeling(labels, 1, f.reshape(-1, 3).mean(axis=0)[None, :])

    lab = rgb_to_lab(f)
    centers = _seed_centers(lab, k)
    step = math.sqrt(n_pixels / centers.shape[0])
    order = np.random.default_rng(seed).permutation(centers.shape[0])

    labels = _assign(lab, centers, step, compactness, order)
    for _ in range(iterations):
        centers = _update_centers(lab, labels, centers)
        labels = _assign(lab, centers, step, compactness, order)

    min_size = max(1, n_pixels // (4 * centers.shape[0]))
    labels = _enforce_connectivity(labels, min_size)
    labels, count = _relabel_sequential(labels)

    flat = labels.ravel()
    pixel_counts = np.bincount(flat, minlength=count).astype(np.float64)
    mean_color = np.stack(
        [np.bincount(flat, weights=f[:, :, ch].ravel(), minlength=count) / pixel_counts
         for ch in range(3)], axis=1)

    logger.debug(f"SLIC: k={k} solicitado, {count} regiones")
    return SuperpixelLabeling(labels=labels, count=count, mean_color=mean_color)
