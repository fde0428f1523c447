"""
Nodos base para SalFlow
Parámetros de entrada y nodos con estado entre fotogramas
"""

from abc import abstractmethod
from typing import Any, Dict, Optional

from core.node_system import Node
from core.socket_types import SocketType


class ParameterNode(Node):
    """
    Clase base para nodos que exponen un valor fijado desde fuera del grafo
    """

    NODE_CATEGORY = "parameters"

    def __init__(self, title: Optional[str] = None, parameter_type: SocketType = None,
                 default_value: Any = None):
        # El tipo debe existir antes de que super().__init__ declare los sockets
        self.parameter_type = parameter_type
        self.parameter_value = default_value
        super().__init__(title)

    def _init_sockets(self):
        self.add_output("value", self.parameter_type)

    def compute(self) -> Dict[str, Any]:
        return {"value": self.parameter_value}

    def set_parameter(self, name: str, value: Any):
        """Fija el valor (validado con el tipo del parámetro) y marca dependientes"""
        if name != "value":
            raise KeyError(f"Parámetro desconocido en {self.title}: {name}")
        self.parameter_value = self.parameter_type.ensure(value, f"{self.title}.value")
        self.mark_dirty()


class StatefulNode(Node):
    """
    Nodo que conserva estado de un fotograma al siguiente.
    El estado se reinicia al empezar cada vídeo.
    """

    NODE_CATEGORY = "operations"

    def __init__(self, title: Optional[str] = None):
        super().__init__(title)
        self.reset_state()

    @abstractmethod
    def reset_state(self):
        """Vuelve al estado de inicio de vídeo"""
