"""
Archivo de parámetros: blob binario float64 little-endian más un manifiesto JSON
"""

import hashlib
import logging
from pathlib import Path
from typing import Tuple, Union

import numpy as np

from config import APP_NAME, APP_VERSION, FORMAT_VERSION
from net.network import NetworkScale, NetworkSpec, ParamStore, build_sgf
from utils.io.export_formats import read_json, write_json

logger = logging.getLogger(__name__)

BLOB_DTYPE = np.dtype('<f8')


def manifest_path(blob_path: Union[str, Path]) -> Path:
    """params.bin -> params.json"""
    return Path(blob_path).with_suffix('.json')


def save_params(params: ParamStore, spec: NetworkSpec, path: Union[str, Path]) -> Path:
    """Escribe el blob en orden de manifiesto y devuelve la ruta del manifiesto"""
    params.check_against(spec)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    entries = []
    chunks = []
    offset = 0
    for name in params.names():
        value = params[name]
        entries.append({'name': name, 'shape': list(value.shape), 'offset': offset})
        chunks.append(np.ascontiguousarray(value, dtype=BLOB_DTYPE).tobytes())
        offset += value.size

    blob = b"".join(chunks)
    path.write_bytes(blob)
    manifest = {
        'app': APP_NAME,
        'app_version': APP_VERSION,
        'format_version': FORMAT_VERSION,
        'variant': spec.variant,
        'scale': spec.scale.to_dict(),
        'dtype': 'float64-le',
        'count': offset,
        'sha256': hashlib.sha256(blob).hexdigest(),
        'entries': entries,
    }
    out = write_json(manifest_path(path), manifest)
    logger.info(f"Parámetros {spec.variant} guardados en {path} ({offset} valores)")
    return out


def load_params(path: Union[str, Path]) -> Tuple[NetworkSpec, ParamStore]:
    """Lee blob y manifiesto, verifica huella y formas, y reconstruye la especificación"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Archivo de parámetros no encontrado: {path}")
    manifest = read_json(manifest_path(path))

    if manifest.get('format_version') != FORMAT_VERSION:
        raise ValueError(f"Versión de formato no soportada: {manifest.get('format_version')}")
    blob = path.read_bytes()
    digest = hashlib.sha256(blob).hexdigest()
    if digest != manifest.get('sha256'):
        raise ValueError(f"Huella SHA-256 no coincide para {path}")

    data = np.frombuffer(blob, dtype=BLOB_DTYPE)
    if data.size != manifest['count']:
        raise ValueError(f"{path}: {data.size} valores, el manifiesto declara {manifest['count']}")

    spec = build_sgf(manifest['variant'], NetworkScale.from_dict(manifest['scale']))
    values = {}
    for entry in manifest['entries']:
        shape = tuple(entry['shape'])
        size = int(np.prod(shape))
        start = entry['offset']
        values[entry['name']] = data[start:start + size].reshape(shape).astype(np.float64)

    params = ParamStore(values)
    params.check_against(spec)
    logger.debug(f"Parámetros {spec.variant} cargados de {path}")
    return spec, params
