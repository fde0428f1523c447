"""
Motor de ejecución del pipeline por vídeo

Construye el grafo entrada -> borde -> saliencia -> salida y lo recorre
fotograma a fotograma. Cada vídeo empieza con el estado reiniciado.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from config import get_config_value
from core.node_system import NodeGraph
from net.serialization import load_params
from nodes.inputs.frame_input import FrameInputNode
from nodes.operations.boundary_node import BoundaryNode
from nodes.operations.saliency_node import FrameTrace, Model, SaliencyNode
from nodes.outputs.saliency_output import SaliencyOutputNode
from opb.boundary import OpbParams
from train.dataset import VIDEO_DIR_PATTERN
from utils.io.image_loader import list_frames, load_frames
from utils.performance import Stopwatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PipelineConfig:
    """Parámetros de SGF3 y SGFE, bordes, directorios de entrada y salida"""
    sgf3_params: Path
    sgfe_params: Path
    frames_dir: Path
    out_dir: Path
    opb: OpbParams = field(default_factory=OpbParams)
    seed: int = 0

    def __post_init__(self):
        for name in ('sgf3_params', 'sgfe_params', 'frames_dir', 'out_dir'):
            object.__setattr__(self, name, Path(getattr(self, name)))
        for name in ('sgf3_params', 'sgfe_params'):
            if not getattr(self, name).exists():
                raise FileNotFoundError(f"Archivo de parámetros no encontrado: {getattr(self, name)}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PipelineConfig':
        return cls(
            sgf3_params=data['sgf3_params'],
            sgfe_params=data['sgfe_params'],
            frames_dir=data['frames_dir'],
            out_dir=data['out_dir'],
            opb=OpbParams.from_dict(data.get('opb', {})),
            seed=int(data.get('seed', 0)),
        )

    @classmethod
    def from_config(cls, paths: Dict[str, Any], source: dict = None) -> 'PipelineConfig':
        """Rutas explícitas más las secciones opb y pipeline de la configuración"""
        return cls.from_dict(dict(
            paths,
            opb=get_config_value('opb', {}, source),
            seed=get_config_value('pipeline.seed', 0, source),
        ))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'sgf3_params': str(self.sgf3_params),
            'sgfe_params': str(self.sgfe_params),
            'frames_dir': str(self.frames_dir),
            'out_dir': str(self.out_dir),
            'opb': self.opb.to_dict(),
            'seed': self.seed,
        }

    def load_models(self) -> Dict[str, Model]:
        """Carga y valida los dos modelos (variantes y escalas coherentes)"""
        models = {}
        for variant, path in (("SGF3", self.sgf3_params), ("SGFE", self.sgfe_params)):
            spec, params = load_params(path)
            if spec.variant != variant:
                raise ValueError(f"{path} contiene {spec.variant}, se esperaba {variant}")
            models[variant] = (spec, params)
        if models["SGF3"][0].scale.input_side != models["SGFE"][0].scale.input_side:
            raise ValueError("SGF3 y SGFE se entrenaron con lados de entrada distintos")
        return models


@dataclass
class VideoResult:
    maps: List[np.ndarray] = field(default_factory=list)
    traces: List[FrameTrace] = field(default_factory=list)
    boundaries: List[Optional[np.ndarray]] = field(default_factory=list)
    paths: List[Path] = field(default_factory=list)


@dataclass
class PipelineGraph:
    """Grafo de un vídeo con acceso directo a sus nodos"""
    graph: NodeGraph
    source: FrameInputNode
    boundary: BoundaryNode
    saliency: SaliencyNode
    output: SaliencyOutputNode

    def reset(self):
        self.graph.reset_state()


def build_pipeline(spatial: Model, temporal: Optional[Model], opb_params: OpbParams,
                   zero_boundary: bool = False,
                   out_dir: Union[str, Path, None] = None) -> PipelineGraph:
    graph = NodeGraph()
    source = graph.add_node(FrameInputNode())
    boundary = graph.add_node(BoundaryNode(opb_params))
    saliency = graph.add_node(SaliencyNode(spatial, temporal, zero_boundary))
    output = graph.add_node(SaliencyOutputNode(out_dir))

    graph.connect(source, "frame", boundary, "frame")
    graph.connect(source, "previous", boundary, "previous")
    graph.connect(source, "frame", saliency, "frame")
    if temporal is not None:
        graph.connect(boundary, "boundary", saliency, "boundary")
    graph.connect(saliency, "saliency", output, "saliency")
    graph.connect(saliency, "trace", output, "trace")
    return PipelineGraph(graph, source, boundary, saliency, output)


def run_frames(frames: Sequence[np.ndarray], spatial: Model, temporal: Optional[Model],
               opb_params: OpbParams = None, zero_boundary: bool = False,
               out_dir: Union[str, Path, None] = None,
               keep_boundaries: bool = False) -> VideoResult:
    """Recorre los fotogramas de un vídeo en orden estricto"""
    if not frames:
        raise ValueError("El vídeo no tiene fotogramas")
    pipeline = build_pipeline(spatial, temporal, opb_params or OpbParams(), zero_boundary, out_dir)
    pipeline.reset()
    result = VideoResult()

    for frame in frames:
        pipeline.source.push(frame)
        pipeline.output.get_output_value("count")
        if keep_boundaries:
            result.boundaries.append(pipeline.boundary.get_output_value("boundary"))

    result.maps = list(pipeline.output.maps)
    result.traces = list(pipeline.output.traces)
    result.paths = list(pipeline.output.paths)
    return result


def run_video(frames: Sequence[np.ndarray], cfg: PipelineConfig,
              out_dir: Union[str, Path, None] = None) -> VideoResult:
    """
    Primer fotograma con SGF3; del segundo en adelante SGFE con la
    predicción anterior del propio pipeline y el borde del par.
    """
    models = cfg.load_models()
    return run_frames(frames, models["SGF3"], models["SGFE"], cfg.opb, out_dir=out_dir)


def discover_videos(root: Union[str, Path]) -> List[Path]:
    """Un directorio de fotogramas, o video_NNN/frames bajo un conjunto de datos"""
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"Directorio de entrada no encontrado: {root}")
    if list_frames(root):
        return [root]
    return [d / "frames" for d in sorted(root.iterdir())
            if d.is_dir() and VIDEO_DIR_PATTERN.match(d.name) and (d / "frames").is_dir()]


def run_pipeline(cfg: PipelineConfig) -> Dict[str, Any]:
    """
    Procesa cada vídeo de cfg.frames_dir de forma independiente; un vídeo
    que falla se registra y el resto continúa.
    """
    models = cfg.load_models()
    videos = discover_videos(cfg.frames_dir)
    summary: Dict[str, Any] = {'videos': [], 'errors': []}

    for frames_dir in videos:
        single = frames_dir == cfg.frames_dir
        name = frames_dir.name if single else frames_dir.parent.name
        out_dir = cfg.out_dir if single else cfg.out_dir / name
        watch = Stopwatch()
        try:
            frames = load_frames(frames_dir)
            result = run_frames(frames, models["SGF3"], models["SGFE"], cfg.opb, out_dir=out_dir)
        except (OSError, ValueError) as e:
            logger.error(f"Vídeo {name} omitido: {e}")
            summary['errors'].append({'video': name, 'error': type(e).__name__, 'message': str(e)})
            continue
        logger.info(f"Vídeo {name}: {len(result.maps)} mapas en {watch.elapsed_ms():.0f} ms")
        summary['videos'].append({
            'video': name,
            'frames': len(result.maps),
            'variants': [t.variant for t in result.traces],
        })
    return summary

