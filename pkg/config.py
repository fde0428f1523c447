"""
Configuración de SalFlow
Define constantes y configuraciones globales del pipeline de saliencia
"""

import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

# Información de la aplicación
APP_NAME = "SalFlow"
APP_VERSION = "0.1.0"
APP_DESCRIPTION = "Detección de fijaciones oculares en vídeo con redes totalmente convolucionales"

# Directorios
ROOT_DIR = Path(__file__).parent.absolute()

# Configuración de logging
LOG_LEVEL = logging.INFO
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Versión del formato de parámetros y manifiestos
FORMAT_VERSION = 1

# Configuración por defecto
DEFAULT_CONFIG = {
    'fixmap': {
        'window_w': 35,
        'alpha': 1.0,
        'beta': 3.0,
    },
    'opb': {
        'theta': None,              # None = umbral adaptativo
        'theta_scale': 0.1,
        'theta_percentile': 99.0,
        'alpha': 0.75,
        'mu': 0.5,
        'lambda': 0.5,
        'sigma': 0.3,
        'superpixel_count': 100,
        'compactness': 10.0,
        'slic_iterations': 10,
        'flow_iterations': 100,
        'flow_smoothness': 0.1,
        'flow_levels': 3,
        'flow_warps': 2,
        'seed': 0,
    },
    'net': {
        'input_side': 64,
        'widths': [8, 16, 32, 32, 32],
    },
    'train': {
        'learning_rate': 1e-2,
        'momentum': 0.9,
        'weight_decay': 5e-4,
        'eta': 1.0,
        'epochs': 5,
        'batch_size': 4,
        'seed': 0,
        'stage': 1,
        'normalize_by_area': True,
        'hflip': False,
        'finetune_variants': ['SGF3'],
    },
    'metrics': {
        'emd_grid': 16,
        'negatives_per_positive': 100,
        'seed': 0,
    },
    'synth': {
        'frame_size': 64,
        'object_kind': 'square',
        'object_size': 12,
        'trajectory': 'linear',
        'speed': 2.0,
        'noise': 0.2,
        'frames_per_clip': 30,
        'clips': 20,
        'subjects': 8,
        'gaze_jitter': 2.0,
        'fps': 25.0,
        'screen_scale': 2,
        'splat_window': 6,
        'seed': 0,
    },
    'pipeline': {
        'seed': 0,
    },
}

# Variable global de configuración
config = copy.deepcopy(DEFAULT_CONFIG)

logger = logging.getLogger(__name__)


def merge_configs(default: dict, user: dict) -> dict:
    """Combina configuración por defecto con configuración de usuario"""
    result = copy.deepcopy(default)

    for key, value in user.items():
        if key in result and isinstance(result[key], dict) and isinstance(value, dict):
            result[key] = merge_configs(result[key], value)
        else:
            result[key] = copy.deepcopy(value)

    return result


def get_config_value(key_path: str, default_value=None, source: Optional[dict] = None):
    """Obtiene un valor de configuración usando notación de punto"""
    keys = key_path.split('.')
    value = config if source is None else source

    try:
        for key in keys:
            value = value[key]
        return value
    except (KeyError, TypeError):
        return default_value


def set_config_value(key_path: str, value, target: Optional[dict] = None):
    """Establece un valor de configuración usando notación de punto"""
    keys = key_path.split('.')
    target = config if target is None else target

    for key in keys[:-1]:
        if key not in target:
            target[key] = {}
        target = target[key]

    target[keys[-1]] = value


def load_user_config(path: Union[str, Path, None]) -> Dict[str, Any]:
    """
    Carga un JSON de usuario y lo combina con DEFAULT_CONFIG.
    Sin ruta devuelve una copia de la configuración por defecto.
    """
    if path is None:
        return copy.deepcopy(DEFAULT_CONFIG)

    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Archivo de configuración no encontrado: {path}")

    with open(path, 'r', encoding='utf-8') as f:
        user_config = json.load(f)

    logger.info(f"Configuración cargada desde {path}")
    return merge_configs(DEFAULT_CONFIG, user_config)


def save_user_config(values: Dict[str, Any], path: Union[str, Path]):
    """Guarda una configuración en JSON (claves ordenadas)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(values, f, indent=2, sort_keys=True, ensure_ascii=False)
    logger.info(f"Configuración guardada en {path}")
