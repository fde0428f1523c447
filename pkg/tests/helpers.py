"""
Utilidades compartidas por las pruebas: modelos diminutos y vídeos sintéticos en memoria
"""

import numpy as np

from core.synthetic import SyntheticSpec
from net.network import NetworkScale, ParamStore, build_sgf
from opb.boundary import OpbParams
from utils.io.export_formats import save_ppm

TINY_SCALE = NetworkScale(input_side=16, widths=(2, 2, 2, 2, 2))
FAST_OPB = OpbParams(superpixel_count=8, flow_iterations=10, flow_levels=2, flow_warps=1)
TINY_SYNTH = SyntheticSpec(frame_size=24, object_size=6, speed=1.0, frames_per_clip=4, clips=3,
                           subjects=3, splat_window=4, seed=5)


def tiny_model(variant: str, seed: int = 0):
    spec = build_sgf(variant, TINY_SCALE)
    return spec, ParamStore.initialize(spec, np.random.default_rng(seed))


def moving_frames(count: int = 3, size=(20, 24), step: int = 2):
    """Cuadrado claro que avanza `step` píxeles por fotograma sobre fondo oscuro"""
    frames = []
    for k in range(count):
        frame = np.full(size + (3,), 0.15)
        frame[6:12, 4 + step * k:10 + step * k] = (0.9, 0.8, 0.2)
        frames.append(frame)
    return frames


def write_video(directory, frames):
    for k, frame in enumerate(frames):
        save_ppm(frame, directory / f"frame_{k:06d}.ppm")
    return directory
