"""
Muestras de mirada y su normalización a coordenadas de vídeo
"""

import csv
import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Union

from utils.io.export_formats import read_json

logger = logging.getLogger(__name__)

GAZE_HEADER = ("video_id", "subject_id", "x", "y", "timestamp_us")


@dataclass(frozen=True)
class GazeSample:
    """Un registro crudo del eye-tracker (píxeles de pantalla, microsegundos)"""
    subject_id: int
    video_id: int
    gaze_x: float
    gaze_y: float
    timestamp_us: int

    def __post_init__(self):
        if self.timestamp_us < 0:
            raise ValueError(f"timestamp_us negativo: {self.timestamp_us}")
        if not (math.isfinite(self.gaze_x) and math.isfinite(self.gaze_y)):
            raise ValueError(f"Coordenadas de mirada no finitas: ({self.gaze_x}, {self.gaze_y})")


@dataclass(frozen=True)
class VideoMeta:
    """Resolución, cadencia y duración de un vídeo"""
    video_id: int
    vr_x: int
    vr_y: int
    fps: float
    frame_count: int

    def __post_init__(self):
        if self.vr_x <= 0 or self.vr_y <= 0 or self.fps <= 0 or self.frame_count <= 0:
            raise ValueError(f"Metadatos de vídeo inválidos: {self}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'VideoMeta':
        return cls(
            video_id=int(data['video_id']),
            vr_x=int(data['vr_x']),
            vr_y=int(data['vr_y']),
            fps=float(data['fps']),
            frame_count=int(data['frame_count']),
        )

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class ScreenMeta:
    """Resolución de la pantalla de presentación"""
    sr_x: int
    sr_y: int

    def __post_init__(self):
        if self.sr_x <= 0 or self.sr_y <= 0:
            raise ValueError(f"Resolución de pantalla inválida: {self}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScreenMeta':
        return cls(sr_x=int(data['sr_x']), sr_y=int(data['sr_y']))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class FrameFixation:
    """Fijación normalizada: fotograma k y posición en píxeles de vídeo"""
    frame_index: int
    x: float
    y: float
    subject_id: int
    out_of_range: bool = False

    def __post_init__(self):
        if self.frame_index < 0:
            raise ValueError(f"frame_index negativo: {self.frame_index}")


def normalize_gaze(s: GazeSample, v: VideoMeta, scr: ScreenMeta) -> FrameFixation:
    """
    Lleva una muestra de pantalla al espacio del vídeo.

    La escala es la de ajuste por ancho (VR_x / SR_x) y la franja negra
    vertical se descuenta de y. El índice de fotograma es floor(t * fps)
    y se limita a [0, frame_count - 1] marcando out_of_range.
    """
    if not (math.isfinite(s.gaze_x) and math.isfinite(s.gaze_y)):
        raise ValueError("Muestra de mirada con coordenadas no finitas")

    scale = v.vr_x / scr.sr_x
    letterbox = (scr.sr_y - v.vr_y * scr.sr_x / v.vr_x) / 2.0
    x = scale * s.gaze_x
    y = scale * (s.gaze_y - letterbox)

    k = math.floor(s.timestamp_us * v.fps / 1e6)
    out_of_range = k > v.frame_count - 1
    if out_of_range:
        logger.warning(
            f"Muestra fuera de rango: vídeo {v.video_id}, sujeto {s.subject_id}, "
            f"fotograma {k} >= {v.frame_count}"
        )
        k = v.frame_count - 1

    return FrameFixation(frame_index=k, x=x, y=y, subject_id=s.subject_id,
                         out_of_range=out_of_range)


# ===========================================
# LECTURA DE ARCHIVOS
# ===========================================

def load_gaze_csv(path: Union[str, Path]) -> List[GazeSample]:
    """Lee el CSV video_id,subject_id,x,y,timestamp_us"""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Registro de mirada no encontrado: {path}")

    samples = []
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.DictReader(f)
        missing = set(GAZE_HEADER) - set(reader.fieldnames or [])
        if missing:
            raise ValueError(f"Cabecera de mirada incompleta, faltan: {sorted(missing)}")
        for row in reader:
            samples.append(GazeSample(
                subject_id=int(row['subject_id']),
                video_id=int(row['video_id']),
                gaze_x=float(row['x']),
                gaze_y=float(row['y']),
                timestamp_us=int(row['timestamp_us']),
            ))

    logger.info(f"{len(samples)} muestras de mirada leídas de {path}")
    return samples


def load_video_meta(path: Union[str, Path]) -> Dict[int, VideoMeta]:
    """Lee metadatos de vídeo: un objeto o una lista de objetos JSON"""
    payload = read_json(path)
    entries = payload if isinstance(payload, list) else [payload]
    metas = [VideoMeta.from_dict(entry) for entry in entries]
    return {meta.video_id: meta for meta in metas}


def load_screen_meta(path: Union[str, Path]) -> ScreenMeta:
    return ScreenMeta.from_dict(read_json(path))
