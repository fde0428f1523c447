"""
Salida de mapas de saliencia a PGM de 8 bits
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from core.node_system import Node
from core.socket_types import ANY, UNIT_FIELD
from metrics.curves import to_eight_bit
from utils.io.export_formats import save_pgm

logger = logging.getLogger(__name__)

SALIENCY_PREFIX = "sal"
SALIENCY_TEMPLATE = SALIENCY_PREFIX + "_{:06d}.pgm"


class SaliencyOutputNode(Node):
    """
    Recoge los mapas de cada fotograma y, con directorio de salida,
    los escribe como sal_%06d.pgm.
    """

    NODE_TYPE = "saliency_output"
    NODE_TITLE = "Saliency Output"
    NODE_CATEGORY = "outputs"
    NODE_DESCRIPTION = "Escribe los mapas de saliencia"

    def __init__(self, out_dir: Union[str, Path, None] = None, title: Optional[str] = None):
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.maps: List[np.ndarray] = []
        self.traces: List[Any] = []
        self.paths: List[Path] = []
        super().__init__(title)

    def _init_sockets(self):
        self.add_input("saliency", UNIT_FIELD)
        self.add_input("trace", ANY, optional=True)
        self.add_output("count", ANY)

    def reset_state(self):
        self.maps, self.traces, self.paths = [], [], []

    def compute(self) -> Dict[str, Any]:
        saliency = self.get_input_value("saliency")
        index = len(self.maps)
        self.maps.append(saliency)
        self.traces.append(self.get_input_value("trace"))
        if self.out_dir is not None:
            self.paths.append(save_pgm(to_eight_bit(saliency),
                                       self.out_dir / SALIENCY_TEMPLATE.format(index)))
        return {"count": len(self.maps)}
