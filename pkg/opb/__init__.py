"""
Módulo OPB: mapa de borde del objeto en movimiento
"""

from opb.boundary import (OpbParams, color_gradient, flow_gradient_magnitude, flow_gradient_raw,
                          boundary_sequence, fuse_boundary, opb_pipeline, resolve_theta)
from opb.optical_flow import FlowField, optical_flow
from opb.superpixels import SuperpixelLabeling, slic_superpixels

__all__ = [
    'OpbParams', 'color_gradient', 'flow_gradient_magnitude', 'flow_gradient_raw',
    'boundary_sequence', 'fuse_boundary', 'opb_pipeline', 'resolve_theta',
    'FlowField', 'optical_flow',
    'SuperpixelLabeling', 'slic_superpixels',
]
