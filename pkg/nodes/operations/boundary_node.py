"""
Nodo de borde de objeto en movimiento (superpíxeles + flujo óptico)
"""

import logging
from typing import Any, Dict, Optional

import numpy as np

from core.socket_types import FIELD, FRAME
from nodes.base.base_node import StatefulNode
from opb.boundary import OpbParams, opb_pipeline
from utils.performance import timed

logger = logging.getLogger(__name__)


class BoundaryNode(StatefulNode):
    """
    Calcula el borde del par (anterior, actual) encadenando el borde del
    paso previo. Sin fotograma anterior la salida es None.
    """

    NODE_TYPE = "opb_boundary"
    NODE_TITLE = "OPB Boundary"
    NODE_DESCRIPTION = "Borde de objeto a partir de gradiente de color y de flujo"

    def __init__(self, params: OpbParams = None, title: Optional[str] = None):
        self.params = params or OpbParams()
        self.previous_boundary: Optional[np.ndarray] = None
        super().__init__(title)

    def _init_sockets(self):
        self.add_input("frame", FRAME)
        self.add_input("previous", FRAME, optional=True)
        self.add_output("boundary", FIELD)

    def reset_state(self):
        self.previous_boundary = None

    def compute(self) -> Dict[str, Any]:
        previous = self.get_input_value("previous")
        if previous is None:
            return {"boundary": None}
        with timed(f"{self.title}"):
            boundary = opb_pipeline(previous, self.get_input_value("frame"),
                                    self.previous_boundary, self.params)
        self.previous_boundary = boundary
        return {"boundary": boundary}
