"""
Entrada de fotogramas: expone el fotograma actual y el anterior
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from core.socket_types import ANY, FRAME
from nodes.base.base_node import ParameterNode

logger = logging.getLogger(__name__)


class FrameInputNode(ParameterNode):
    """
    Recibe los fotogramas de un vídeo en orden mediante push().
    La salida previous es None en el primer fotograma.
    """

    NODE_TYPE = "frame_input"
    NODE_TITLE = "Frame Input"
    NODE_CATEGORY = "inputs"
    NODE_DESCRIPTION = "Fotograma actual y anterior del vídeo"

    def __init__(self, title: Optional[str] = None):
        self.previous: Optional[np.ndarray] = None
        self.index = -1
        super().__init__(title, FRAME, None)

    def _init_sockets(self):
        self.add_output("frame", FRAME)
        self.add_output("previous", FRAME)
        self.add_output("index", ANY)

    def push(self, frame: np.ndarray):
        frame = FRAME.ensure(frame, "frame")
        if self.parameter_value is not None and frame.shape != self.parameter_value.shape:
            raise ValueError(
                f"Fotograma {self.index + 1}: forma {frame.shape} distinta de la del vídeo "
                f"{self.parameter_value.shape}"
            )
        self.previous = self.parameter_value
        self.index += 1
        self.set_parameter("value", frame)

    def reset_state(self):
        self.previous = None
        self.parameter_value = None
        self.index = -1

    def compute(self) -> Dict[str, Any]:
        if self.parameter_value is None:
            raise ValueError(f"{self.title}: no se ha recibido ningún fotograma")
        return {"frame": self.parameter_value, "previous": self.previous, "index": self.index}
