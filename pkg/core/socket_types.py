"""
Tipos de datos para sockets en SalFlow
Define los diferentes tipos de datos que fluyen entre nodos del pipeline
y las validaciones compartidas por los módulos numéricos
"""

from abc import ABC, abstractmethod
from typing import Any, Optional, Tuple

import numpy as np


class SocketType(ABC):
    """
    Clase base abstracta para tipos de socket
    """

    def __init__(self, name: str):
        self.name = name

    @abstractmethod
    def is_compatible_with(self, other: 'SocketType') -> bool:
        """Verifica si este tipo es compatible con otro"""
        pass

    @abstractmethod
    def validate_value(self, value: Any) -> bool:
        """Valida si un valor es válido para este tipo"""
        pass

    @abstractmethod
    def convert_value(self, value: Any) -> Any:
        """Convierte un valor al tipo apropiado"""
        pass

    def ensure(self, value: Any, label: str = "valor") -> Any:
        """Convierte y valida; lanza ValueError si el valor no es aceptable"""
        try:
            converted = self.convert_value(value)
        except (TypeError, ValueError) as e:
            raise ValueError(f"{label}: no convertible a {self.name} ({e})") from e
        if not self.validate_value(converted):
            raise ValueError(f"{label}: valor inválido para {self.name}")
        return converted

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}('{self.name}')>"


class FieldType(SocketType):
    """
    Campo escalar 2-D (saliencia, gradientes, bordes, densidad)
    """

    def __init__(self, min_value: Optional[float] = None, max_value: Optional[float] = None):
        super().__init__("ScalarField")
        self.min_value = min_value
        self.max_value = max_value

    def is_compatible_with(self, other: 'SocketType') -> bool:
        return isinstance(other, FieldType)

    def validate_value(self, value: Any) -> bool:
        if not isinstance(value, np.ndarray) or value.ndim != 2 or value.size == 0:
            return False
        if not np.all(np.isfinite(value)):
            return False
        if self.min_value is not None and value.min() < self.min_value:
            return False
        if self.max_value is not None and value.max() > self.max_value:
            return False
        return True

    def convert_value(self, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)


class FrameType(SocketType):
    """
    Fotograma RGB alto x ancho x 3 con valores en [0, 1]
    """

    def __init__(self):
        super().__init__("RgbFrame")

    def is_compatible_with(self, other: 'SocketType') -> bool:
        return isinstance(other, FrameType)

    def validate_value(self, value: Any) -> bool:
        if not isinstance(value, np.ndarray) or value.ndim != 3 or value.shape[2] != 3:
            return False
        if value.shape[0] == 0 or value.shape[1] == 0:
            return False
        if not np.all(np.isfinite(value)):
            return False
        return bool(value.min() >= 0.0 and value.max() <= 1.0)

    def convert_value(self, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)


class TensorType(SocketType):
    """
    Tensor N-D real (activaciones y parámetros de la red)
    """

    def __init__(self, ndim: Optional[int] = None):
        super().__init__("Tensor" if ndim is None else f"Tensor{ndim}D")
        self.ndim = ndim

    def is_compatible_with(self, other: 'SocketType') -> bool:
        if isinstance(other, TensorType):
            return self.ndim is None or other.ndim is None or self.ndim == other.ndim
        return False

    def validate_value(self, value: Any) -> bool:
        if not isinstance(value, np.ndarray) or value.size == 0:
            return False
        if self.ndim is not None and value.ndim != self.ndim:
            return False
        return bool(np.all(np.isfinite(value)))

    def convert_value(self, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)


class MaskType(SocketType):
    """
    Máscara booleana 2-D (primer plano / fondo)
    """

    def __init__(self):
        super().__init__("Mask")

    def is_compatible_with(self, other: 'SocketType') -> bool:
        return isinstance(other, MaskType)

    def validate_value(self, value: Any) -> bool:
        return isinstance(value, np.ndarray) and value.ndim == 2 and value.size > 0

    def convert_value(self, value: Any) -> np.ndarray:
        return np.asarray(value).astype(bool)


class AnyType(SocketType):
    """
    Tipo que acepta cualquier valor (wildcard)
    """

    def __init__(self):
        super().__init__("Any")

    def is_compatible_with(self, other: 'SocketType') -> bool:
        return True

    def validate_value(self, value: Any) -> bool:
        return True

    def convert_value(self, value: Any) -> Any:
        return value


# ===========================================
# INSTANCIAS GLOBALES DE TIPOS COMUNES
# ===========================================

FIELD = FieldType()
UNIT_FIELD = FieldType(min_value=0.0, max_value=1.0)
FRAME = FrameType()
TENSOR3D = TensorType(3)
MASK = MaskType()
ANY = AnyType()


# ===========================================
# UTILIDADES DE TIPOS
# ===========================================

def require_same_shape(a: np.ndarray, b: np.ndarray, label: str) -> Tuple[int, ...]:
    """Lanza ValueError si dos arreglos no comparten forma"""
    if a.shape != b.shape:
        raise ValueError(f"{label}: formas distintas {a.shape} vs {b.shape}")
    return a.shape

