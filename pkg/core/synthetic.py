"""
Generador de conjuntos de datos sintéticos

Cada clip muestra un objeto de color (cuadrado o disco) que se desplaza
sobre un fondo de ruido texturizado. La mirada simulada de cada sujeto es
el centro del objeto más un temblor gaussiano; los mapas de referencia se
construyen con fixmap a partir de esa mirada.
"""

import logging
import math
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np

from config import get_config_value
from fixmap.density import GaussianSplatParams
from fixmap.gaze import GAZE_HEADER, GazeSample, ScreenMeta, VideoMeta
from fixmap.ground_truth import build_ground_truth, write_ground_truth
from utils.imaging.filters import smooth
from utils.io.export_formats import save_pgm, save_ppm, write_csv, write_json
from utils.seeding import make_rng

logger = logging.getLogger(__name__)

OBJECT_KINDS = ("square", "disc")
TRAJECTORIES = ("linear", "sinusoidal")
PALETTE = ((0.95, 0.15, 0.1), (0.1, 0.85, 0.2), (0.15, 0.3, 0.95), (0.95, 0.85, 0.1))

FRAME_TEMPLATE = "frame_{:06d}.ppm"
MASK_TEMPLATE = "mask_{:06d}.pgm"
VIDEO_TEMPLATE = "video_{:03d}"


@dataclass(frozen=True)
class SyntheticSpec:
    frame_size: int = 64
    object_kind: str = "square"
    object_size: int = 12
    trajectory: str = "linear"
    speed: float = 2.0
    noise: float = 0.2
    frames_per_clip: int = 30
    clips: int = 20
    subjects: int = 8
    gaze_jitter: float = 2.0
    fps: float = 25.0
    screen_scale: int = 2
    splat_window: int = 6
    seed: int = 0

    def __post_init__(self):
        if self.object_kind not in OBJECT_KINDS:
            raise ValueError(f"Tipo de objeto desconocido: {self.object_kind}")
        if self.trajectory not in TRAJECTORIES:
            raise ValueError(f"Trayectoria desconocida: {self.trajectory}")
        if not 0.0 <= self.noise < 1.0:
            raise ValueError(f"noise debe estar en [0, 1): {self.noise}")
        if self.frame_size < 8 or not 1 <= self.object_size < self.frame_size:
            raise ValueError(f"Tamaños inválidos: fotograma {self.frame_size}, objeto {self.object_size}")
        if self.frames_per_clip < 1 or self.clips < 1 or self.subjects < 1:
            raise ValueError("frames_per_clip, clips y subjects deben ser positivos")
        if self.speed < 0 or self.gaze_jitter < 0 or self.fps <= 0 or self.screen_scale < 1:
            raise ValueError(f"Parámetros de movimiento o de pantalla inválidos: {self}")
        if self.travel > self.frame_size:
            raise ValueError(
                f"El objeto saldría del fotograma: recorrido {self.travel:.1f} > {self.frame_size}"
            )

    @property
    def travel(self) -> float:
        """Recorrido máximo del centro a lo largo del clip"""
        if self.trajectory == "linear":
            return self.speed * (self.frames_per_clip - 1)
        return 2.0 * self._amplitude

    @property
    def _amplitude(self) -> float:
        return self.speed * self.frames_per_clip / (2.0 * math.pi)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SyntheticSpec':
        known = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_config(cls, source: dict = None) -> 'SyntheticSpec':
        return cls.from_dict(get_config_value('synth', {}, source))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SyntheticClip:
    frames: List[np.ndarray]
    masks: List[np.ndarray]
    centers: List[Tuple[float, float]]     # (x, y) en píxeles de vídeo


def _centers(spec: SyntheticSpec, rng: np.random.Generator) -> List[Tuple[float, float]]:
    angle = rng.uniform(0.0, 2.0 * math.pi)
    direction = np.array([math.cos(angle), math.sin(angle)])
    slack = (spec.frame_size - spec.travel) / 2.0
    middle = spec.frame_size / 2.0 - 0.5 + rng.uniform(-slack, slack, size=2) * 0.5

    centers = []
    for k in range(spec.frames_per_clip):
        if spec.trajectory == "linear":
            offset = spec.speed * (k - (spec.frames_per_clip - 1) / 2.0)
        else:
            offset = spec._amplitude * math.sin(2.0 * math.pi * k / spec.frames_per_clip)
        x, y = middle + direction * offset
        centers.append((float(x), float(y)))
    return centers


def _object_mask(spec: SyntheticSpec, center: Tuple[float, float]) -> np.ndarray:
    rows, cols = np.indices((spec.frame_size, spec.frame_size), dtype=np.float64)
    half = spec.object_size / 2.0
    dx, dy = cols - center[0], rows - center[1]
    if spec.object_kind == "square":
        return (np.abs(dx) <= half) & (np.abs(dy) <= half)
    return dx * dx + dy * dy <= half * half


def render_clip(spec: SyntheticSpec, clip_index: int) -> SyntheticClip:
    """Fotogramas RGB, máscaras del objeto y centros de un clip"""
    size = spec.frame_size
    texture_rng = make_rng(spec.seed, f"synth/{clip_index}/texture")
    texture = np.stack([smooth(texture_rng.random((size, size)), 1.5) for _ in range(3)], axis=2)
    texture = (texture - texture.min()) / max(float(np.ptp(texture)), 1e-12)
    background = (1.0 - spec.noise) * 0.5 + spec.noise * texture

    motion_rng = make_rng(spec.seed, f"synth/{clip_index}/motion")
    color = np.array(PALETTE[int(motion_rng.integers(len(PALETTE)))])
    centers = _centers(spec, motion_rng)
    sensor_rng = make_rng(spec.seed, f"synth/{clip_index}/sensor")

    frames, masks = [], []
    for center in centers:
        mask = _object_mask(spec, center)
        frame = background.copy()
        frame[mask] = color
        if spec.noise > 0:
            frame = frame + 0.05 * spec.noise * sensor_rng.standard_normal(frame.shape)
        frames.append(np.clip(frame, 0.0, 1.0))
        masks.append(mask)
    return SyntheticClip(frames, masks, centers)


def simulate_gaze(spec: SyntheticSpec, video_id: int,
                  centers: List[Tuple[float, float]]) -> List[GazeSample]:
    """
    Una muestra por sujeto y fotograma en coordenadas de pantalla, con marca
    temporal en el centro del intervalo del fotograma.
    """
    rng = make_rng(spec.seed, f"synth/{video_id}/gaze")
    samples = []
    for subject in range(spec.subjects):
        for k, (x, y) in enumerate(centers):
            jx, jy = rng.normal(0.0, spec.gaze_jitter, size=2) if spec.gaze_jitter > 0 else (0.0, 0.0)
            samples.append(GazeSample(
                subject_id=subject,
                video_id=video_id,
                gaze_x=(x + float(jx)) * spec.screen_scale,
                gaze_y=(y + float(jy)) * spec.screen_scale,
                timestamp_us=int(math.floor((k + 0.5) * 1e6 / spec.fps)),
            ))
    return samples


def generate_synthetic(spec: SyntheticSpec, out: Union[str, Path]) -> Dict[str, Any]:
    """
    Escribe video_NNN/{frames,gt,masks}, gaze.csv, videos.json y screen.json.
    El resultado es idéntico bit a bit para la misma especificación.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    screen = ScreenMeta(spec.frame_size * spec.screen_scale, spec.frame_size * spec.screen_scale)
    splat = GaussianSplatParams(window_w=spec.splat_window)
    metas, gaze_rows = [], []

    for clip_index in range(spec.clips):
        clip = render_clip(spec, clip_index)
        meta = VideoMeta(clip_index, spec.frame_size, spec.frame_size, spec.fps,
                         spec.frames_per_clip)
        samples = simulate_gaze(spec, clip_index, clip.centers)
        directory = out / VIDEO_TEMPLATE.format(clip_index)

        for k, (frame, mask) in enumerate(zip(clip.frames, clip.masks)):
            save_ppm(frame, directory / "frames" / FRAME_TEMPLATE.format(k))
            save_pgm(mask.astype(np.uint8) * 255, directory / "masks" / MASK_TEMPLATE.format(k))
        write_ground_truth(build_ground_truth(samples, meta, screen, splat), directory / "gt")

        metas.append(meta.to_dict())
        gaze_rows.extend((s.video_id, s.subject_id, s.gaze_x, s.gaze_y, s.timestamp_us)
                         for s in samples)
        logger.debug(f"Clip sintético {clip_index}: {spec.frames_per_clip} fotogramas")

    write_csv(out / "gaze.csv", GAZE_HEADER, gaze_rows)
    write_json(out / "videos.json", metas)
    write_json(out / "screen.json", screen.to_dict())
    logger.info(f"Conjunto sintético: {spec.clips} clips en {out}")
    return {'clips': spec.clips, 'frames_per_clip': spec.frames_per_clip, 'spec': spec.to_dict()}
