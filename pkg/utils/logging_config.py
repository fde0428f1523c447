"""
Configuración de logging para SalFlow
"""

import logging
import sys
from pathlib import Path
from typing import Optional, Union

from config import LOG_FORMAT, LOG_LEVEL


def setup_logging(level: int = LOG_LEVEL,
                  log_file: Optional[Union[str, Path]] = None) -> logging.Logger:
    """Configura el sistema de logging (stream + archivo opcional)"""
    handlers = [logging.StreamHandler(sys.stderr)]

    if log_file is not None:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file, encoding='utf-8'))

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )

    return logging.getLogger("salflow")
