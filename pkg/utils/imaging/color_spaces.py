"""
Conversiones de espacios de color
"""

import numpy as np
from skimage.color import rgb2lab

from core.socket_types import FRAME


def rgb_to_lab(frame: np.ndarray) -> np.ndarray:
    """RGB en [0, 1] a CIELAB (iluminante D65)"""
    frame = FRAME.ensure(frame, "frame")
    return rgb2lab(frame)


def rgb_to_gray(frame: np.ndarray) -> np.ndarray:
    """Luminancia Rec. 601"""
    frame = FRAME.ensure(frame, "frame")
    return frame @ np.array([0.299, 0.587, 0.114])
