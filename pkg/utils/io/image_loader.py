"""
Carga de imágenes PGM/PPM (P5/P6) y directorios de fotogramas
"""

import logging
import re
from pathlib import Path
from typing import List, Union

import numpy as np
from PIL import Image

logger = logging.getLogger(__name__)

FRAME_PATTERN = re.compile(r"frame_(\d{6})\.(ppm|pgm)$")


def load_frame(path: Union[str, Path]) -> np.ndarray:
    """Lee un PPM/PGM como fotograma RGB en [0, 1]"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Fotograma no encontrado: {path}")
    with Image.open(path) as image:
        rgb = np.asarray(image.convert('RGB'), dtype=np.float64)
    return rgb / 255.0


def load_gray(path: Union[str, Path]) -> np.ndarray:
    """Lee un PGM de 8 bits como arreglo uint8"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Mapa no encontrado: {path}")
    with Image.open(path) as image:
        return np.asarray(image.convert('L'), dtype=np.uint8).copy()


def load_unit_map(path: Union[str, Path]) -> np.ndarray:
    """Lee un PGM de 8 bits reescalado a [0, 1]"""
    return load_gray(path).astype(np.float64) / 255.0


def list_frames(directory: Union[str, Path]) -> List[Path]:
    """Fotogramas frame_%06d.ppm ordenados por índice"""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Directorio de fotogramas no encontrado: {directory}")
    found = []
    for path in directory.iterdir():
        match = FRAME_PATTERN.match(path.name)
        if match:
            found.append((int(match.group(1)), path))
    found.sort()
    return [path for _, path in found]


def load_frames(directory: Union[str, Path]) -> List[np.ndarray]:
    """Carga todos los fotogramas de un directorio en orden"""
    paths = list_frames(directory)
    logger.debug(f"{len(paths)} fotogramas en {directory}")
    return [load_frame(path) for path in paths]


def list_maps(directory: Union[str, Path], prefix: str) -> List[Path]:
    """Mapas <prefix>_%06d.pgm ordenados por índice"""
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"Directorio de mapas no encontrado: {directory}")
    pattern = re.compile(rf"{re.escape(prefix)}_(\d{{6}})\.pgm$")
    found = []
    for path in directory.iterdir():
        match = pattern.match(path.name)
        if match:
            found.append((int(match.group(1)), path))
    found.sort()
    return [path for _, path in found]
