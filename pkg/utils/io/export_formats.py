"""
Formatos de exportación: PGM/PPM, CSV y JSON deterministas
"""

import csv
import json
from pathlib import Path
from typing import Any, Iterable, Sequence, Union

import numpy as np
from PIL import Image


def save_pgm(data: np.ndarray, path: Union[str, Path]) -> Path:
    """Escribe una rejilla uint8 como PGM binario (P5)"""
    data = np.asarray(data)
    if data.dtype != np.uint8 or data.ndim != 2:
        raise ValueError(f"PGM requiere rejilla uint8 2-D, recibido {data.dtype} {data.shape}")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(data).save(path, format='PPM')
    return path


def save_ppm(frame: np.ndarray, path: Union[str, Path]) -> Path:
    """Escribe un fotograma RGB en [0, 1] como PPM binario (P6)"""
    frame = np.asarray(frame, dtype=np.float64)
    if frame.ndim != 3 or frame.shape[2] != 3:
        raise ValueError(f"PPM requiere alto x ancho x 3, recibido {frame.shape}")
    data = np.floor(np.clip(frame, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(data).save(path, format='PPM')
    return path


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]],
              append: bool = False) -> Path:
    """Escribe (o añade) filas CSV con cabecera; floats con repr"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    exists = path.exists() and path.stat().st_size > 0
    mode = 'a' if append else 'w'
    with open(path, mode, encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        if not (append and exists):
            writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return path


def write_json(path: Union[str, Path], payload: Any) -> Path:
    """JSON con claves ordenadas para salidas reproducibles"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(payload, f, indent=2, sort_keys=True, ensure_ascii=False)
        f.write("\n")
    return path


def read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"JSON no encontrado: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)
