"""
Conjuntos de entrenamiento: vídeos en disco y pares (entrada, referencia)
"""

import logging
import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from core.socket_types import FIELD, FRAME, UNIT_FIELD
from net.layers import assemble_sgfe_input, frame_to_tensor
from net.network import NetworkSpec
from opb.boundary import OpbParams, boundary_sequence
from utils.imaging.filters import resize_field, resize_frame
from utils.io.image_loader import list_frames, list_maps, load_frame, load_unit_map

logger = logging.getLogger(__name__)

VIDEO_DIR_PATTERN = re.compile(r"video_(\d+)$")


@dataclass(frozen=True)
class ClipData:
    """Rutas de un vídeo del conjunto: fotogramas, mapas de fijación y máscaras"""
    video_id: int
    directory: Path
    frame_paths: Tuple[Path, ...]
    gt_paths: Tuple[Path, ...]
    mask_paths: Tuple[Path, ...]

    @property
    def frame_count(self) -> int:
        return len(self.frame_paths)

    def load_frames(self) -> List[np.ndarray]:
        return [load_frame(p) for p in self.frame_paths]

    def load_gt(self) -> List[np.ndarray]:
        return [load_unit_map(p) for p in self.gt_paths]

    def load_masks(self) -> List[np.ndarray]:
        return [load_unit_map(p) for p in self.mask_paths]


def load_dataset(root: Union[str, Path]) -> List[ClipData]:
    """Directorios video_NNN/{frames,gt,masks} ordenados por identificador"""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"Conjunto de datos no encontrado: {root}")

    clips = []
    for directory in sorted(root.iterdir()):
        match = VIDEO_DIR_PATTERN.match(directory.name)
        if not match or not directory.is_dir():
            continue
        frames = tuple(list_frames(directory / "frames"))
        gt = tuple(list_maps(directory / "gt", "gt")) if (directory / "gt").is_dir() else ()
        masks = tuple(list_maps(directory / "masks", "mask")) if (directory / "masks").is_dir() else ()
        if gt and len(gt) != len(frames):
            raise ValueError(f"{directory}: {len(frames)} fotogramas y {len(gt)} mapas de fijación")
        if masks and len(masks) != len(frames):
            raise ValueError(f"{directory}: {len(frames)} fotogramas y {len(masks)} máscaras")
        clips.append(ClipData(int(match.group(1)), directory, frames, gt, masks))

    clips.sort(key=lambda c: c.video_id)
    logger.info(f"{len(clips)} vídeos en {root}")
    return clips


@dataclass(frozen=True)
class SamplePair:
    """
    Fotograma, referencia en [0, 1] y, para la variante temporal,
    saliencia previa y mapa de borde.
    """
    frame: np.ndarray
    target: np.ndarray
    prev_saliency: Optional[np.ndarray] = None
    boundary: Optional[np.ndarray] = None
    clip_index: int = 0
    frame_index: int = 0

    def __post_init__(self):
        frame = FRAME.ensure(self.frame, "frame")
        target = UNIT_FIELD.ensure(self.target, "target")
        dims = frame.shape[:2]
        if target.shape != dims:
            raise ValueError(f"Referencia {target.shape} no coincide con fotograma {dims}")
        for label in ("prev_saliency", "boundary"):
            value = getattr(self, label)
            if value is not None and FIELD.ensure(value, label).shape != dims:
                raise ValueError(f"{label} {value.shape} no coincide con fotograma {dims}")

    @property
    def area(self) -> int:
        return int(self.target.size)

    def flipped(self) -> 'SamplePair':
        """Volteo horizontal conjunto de todas las capas"""
        def flip(a):
            return None if a is None else np.ascontiguousarray(a[:, ::-1])
        return replace(self, frame=flip(self.frame), target=flip(self.target),
                       prev_saliency=flip(self.prev_saliency), boundary=flip(self.boundary))

    def network_input(self, spec: NetworkSpec) -> Tuple[np.ndarray, Optional[np.ndarray]]:
        """Tensor de entrada y mapa auxiliar según la variante"""
        if spec.input_channels == 4:
            if self.prev_saliency is None or self.boundary is None:
                raise ValueError(f"{spec.variant} requiere saliencia previa y borde")
            return assemble_sgfe_input(self.frame, self.prev_saliency), self.boundary
        return frame_to_tensor(self.frame), None


def _to_side(field: np.ndarray, side: int) -> np.ndarray:
    return np.clip(resize_field(field, (side, side)), 0.0, 1.0)


def stage_one_pairs(clips: List[ClipData], side: int) -> List[SamplePair]:
    """Máscaras de objeto saliente como referencia (mapas de fijación si no hay máscaras)"""
    pairs = []
    for index, clip in enumerate(clips):
        targets = clip.load_masks() if clip.mask_paths else clip.load_gt()
        if not clip.mask_paths:
            logger.warning(f"Vídeo {clip.video_id} sin máscaras: se usan mapas de fijación")
        for k, (frame, target) in enumerate(zip(clip.load_frames(), targets)):
            pairs.append(SamplePair(resize_frame(frame, (side, side)), _to_side(target, side),
                                    clip_index=index, frame_index=k))
    return pairs


def stage_two_pairs(clips: List[ClipData], side: int, opb_params: OpbParams) -> List[SamplePair]:
    """
    Fotogramas 1..n-1 de cada vídeo con la referencia del fotograma anterior
    como saliencia previa y el borde del par (i-1, i).
    """
    pairs = []
    for index, clip in enumerate(clips):
        if not clip.gt_paths:
            raise ValueError(f"Vídeo {clip.video_id} sin mapas de fijación")
        frames = clip.load_frames()
        gt = [_to_side(g, side) for g in clip.load_gt()]
        boundaries = boundary_sequence(frames, opb_params)
        for k in range(1, len(frames)):
            pairs.append(SamplePair(
                frame=resize_frame(frames[k], (side, side)),
                target=gt[k],
                prev_saliency=gt[k - 1],
                boundary=_to_side(boundaries[k - 1], side),
                clip_index=index,
                frame_index=k,
            ))
        logger.debug(f"Vídeo {clip.video_id}: {len(frames) - 1} pares temporales")
    return pairs


def spatial_view(pairs: List[SamplePair]) -> List[SamplePair]:
    """Mismos pares sin canales temporales, para ajustar variantes espaciales"""
    return [replace(p, prev_saliency=None, boundary=None) for p in pairs]
