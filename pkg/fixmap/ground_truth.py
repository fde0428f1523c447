"""
Construcción de los mapas de referencia de un vídeo completo
"""

import logging
from collections import defaultdict
from pathlib import Path
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np

from fixmap.density import GaussianSplatParams, accumulate_fixation_map, quantize_map
from fixmap.gaze import FrameFixation, GazeSample, ScreenMeta, VideoMeta, normalize_gaze
from utils.io.export_formats import save_pgm

logger = logging.getLogger(__name__)

GT_TEMPLATE = "gt_{:06d}.pgm"


def fixations_by_frame(samples: Iterable[GazeSample], video: VideoMeta,
                       screen: ScreenMeta) -> Dict[int, List[FrameFixation]]:
    """
    Normaliza las muestras de un vídeo y las agrupa por fotograma.
    Las muestras fuera de rango se registran y no entran en ningún mapa.
    """
    grouped: Dict[int, List[FrameFixation]] = defaultdict(list)
    dropped = 0
    for sample in samples:
        if sample.video_id != video.video_id:
            continue
        fixation = normalize_gaze(sample, video, screen)
        if fixation.out_of_range:
            dropped += 1
            continue
        grouped[fixation.frame_index].append(fixation)

    if dropped:
        logger.warning(f"Vídeo {video.video_id}: {dropped} muestras fuera de rango descartadas")
    return dict(grouped)


def build_ground_truth(samples: Iterable[GazeSample], video: VideoMeta, screen: ScreenMeta,
                       params: GaussianSplatParams) -> List[np.ndarray]:
    """Un mapa de densidad por fotograma del vídeo (vacío si no hay fijaciones)"""
    grouped = fixations_by_frame(samples, video, screen)
    dims = (video.vr_y, video.vr_x)
    return [accumulate_fixation_map(grouped.get(k, []), params, dims)
            for k in range(video.frame_count)]


def write_ground_truth(maps: List[np.ndarray], out_dir: Union[str, Path]) -> List[Path]:
    """Escribe gt_%06d.pgm de 8 bits"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return [save_pgm(quantize_map(field), out_dir / GT_TEMPLATE.format(k))
            for k, field in enumerate(maps)]


def fixation_points(fixations: Iterable[FrameFixation],
                    dims: Tuple[int, int]) -> List[Tuple[int, int]]:
    """Píxeles (fila, columna) de las fijaciones que caen dentro del fotograma"""
    height, width = dims
    points = []
    for fx in fixations:
        row = int(np.floor(fx.y + 0.5))
        col = int(np.floor(fx.x + 0.5))
        if 0 <= row < height and 0 <= col < width:
            points.append((row, col))
    return points
