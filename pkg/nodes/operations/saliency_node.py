"""
Nodo de predicción de saliencia con las variantes SGF
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Tuple

import numpy as np

from core.socket_types import ANY, FIELD, FRAME, UNIT_FIELD
from net.layers import assemble_sgfe_input, frame_to_tensor
from net.network import NetworkSpec, ParamStore, forward
from nodes.base.base_node import StatefulNode
from utils.imaging.filters import resize_field, resize_frame

logger = logging.getLogger(__name__)

Model = Tuple[NetworkSpec, ParamStore]


@dataclass(frozen=True)
class FrameTrace:
    """Qué entradas consumió la predicción de un fotograma"""
    frame_index: int
    variant: str
    used_previous: bool
    used_boundary: bool
    boundary_zeroed: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class SaliencyNode(StatefulNode):
    """
    Primer fotograma con la variante espacial; los siguientes con la
    temporal, que recibe su propia predicción anterior y el borde actual.
    Sin modelo temporal, la variante espacial procesa todos los fotogramas.
    """

    NODE_TYPE = "sgf_saliency"
    NODE_TITLE = "SGF Saliency"
    NODE_DESCRIPTION = "Mapa de saliencia del fotograma"

    def __init__(self, spatial: Model, temporal: Optional[Model] = None,
                 zero_boundary: bool = False, title: Optional[str] = None):
        spatial_spec, _ = spatial
        if spatial_spec.input_channels != 3:
            raise ValueError(f"La variante espacial no puede ser {spatial_spec.variant}")
        if temporal is not None:
            temporal_spec, _ = temporal
            if not temporal_spec.uses_boundary:
                raise ValueError(f"La variante temporal no puede ser {temporal_spec.variant}")
            if temporal_spec.scale.input_side != spatial_spec.scale.input_side:
                raise ValueError("Las variantes espacial y temporal usan lados de entrada distintos")
        self.spatial = spatial
        self.temporal = temporal
        self.zero_boundary = zero_boundary
        self.previous_saliency: Optional[np.ndarray] = None
        self.frame_index = -1
        super().__init__(title)

    def _init_sockets(self):
        self.add_input("frame", FRAME)
        self.add_input("boundary", FIELD, optional=True)
        self.add_output("saliency", UNIT_FIELD)
        self.add_output("trace", ANY)

    @property
    def side(self) -> int:
        return self.spatial[0].scale.input_side

    def reset_state(self):
        self.previous_saliency = None
        self.frame_index = -1

    def compute(self) -> Dict[str, Any]:
        frame = self.get_input_value("frame")
        self.frame_index += 1
        square = (self.side, self.side)
        small = resize_frame(frame, square)

        if self.temporal is not None and self.previous_saliency is not None:
            spec, params = self.temporal
            boundary = self.get_input_value("boundary")
            if boundary is None:
                raise ValueError(f"Fotograma {self.frame_index}: {spec.variant} requiere el borde")
            if self.zero_boundary:
                aux = np.zeros(square)
            else:
                aux = np.clip(resize_field(boundary, square), 0.0, 1.0)
            pred, _ = forward(spec, params, assemble_sgfe_input(small, self.previous_saliency), aux)
            trace = FrameTrace(self.frame_index, spec.variant, True, not self.zero_boundary,
                               self.zero_boundary)
        else:
            spec, params = self.spatial
            pred, _ = forward(spec, params, frame_to_tensor(small))
            trace = FrameTrace(self.frame_index, spec.variant, False, False, False)

        self.previous_saliency = pred
        saliency = np.clip(resize_field(pred, frame.shape[:2]), 0.0, 1.0)
        logger.debug(f"Fotograma {self.frame_index}: {trace.variant}")
        return {"saliency": saliency, "trace": trace}
