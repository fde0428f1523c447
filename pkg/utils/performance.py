"""
Utilidades de medición de tiempo
"""

import logging
import time
from contextlib import contextmanager
from typing import Iterator, List

logger = logging.getLogger(__name__)


class Stopwatch:
    """Cronómetro simple en milisegundos"""

    def __init__(self):
        self._start = time.perf_counter()
        self.laps: List[float] = []

    def elapsed_ms(self) -> float:
        return (time.perf_counter() - self._start) * 1000.0

    def lap(self) -> float:
        """Registra y devuelve el tiempo desde el inicio"""
        value = self.elapsed_ms()
        self.laps.append(value)
        return value


@contextmanager
def timed(label: str, level: int = logging.DEBUG) -> Iterator[Stopwatch]:
    """Mide un bloque y lo registra al salir"""
    watch = Stopwatch()
    try:
        yield watch
    finally:
        logger.log(level, f"{label}: {watch.elapsed_ms():.1f} ms")
