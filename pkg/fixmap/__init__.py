"""
Mapas de fijación de referencia a partir de registros de mirada
"""

from fixmap.gaze import (
    FrameFixation, GazeSample, ScreenMeta, VideoMeta,
    load_gaze_csv, load_screen_meta, load_video_meta, normalize_gaze,
)
from fixmap.density import (
    GaussianSplatParams, accumulate_fixation_map, gaussian_splat, quantize_map,
)
from fixmap.ground_truth import (
    build_ground_truth, fixation_points, fixations_by_frame, write_ground_truth,
)

__all__ = [
    "FrameFixation", "GazeSample", "ScreenMeta", "VideoMeta",
    "load_gaze_csv", "load_screen_meta", "load_video_meta", "normalize_gaze",
    "GaussianSplatParams", "accumulate_fixation_map", "gaussian_splat", "quantize_map",
    "build_ground_truth", "fixation_points", "fixations_by_frame", "write_ground_truth",
]
