"""
Análisis de ablación: compara las variantes SGF, el borde OPB por sí solo y
SGFE sin borde sobre los vídeos reservados para prueba.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from core.execution_engine import run_frames
from fixmap.gaze import load_gaze_csv, load_screen_meta, load_video_meta
from metrics.fixation_metrics import negative_pool
from metrics.report import EvaluationConfig, evaluate_video, fixation_sets_from_gaze, summarize
from net.serialization import load_params
from nodes.operations.saliency_node import Model
from opb.boundary import OpbParams, boundary_sequence
from train.dataset import ClipData, load_dataset
from train.splits import FOLDS, cross_validation_split
from utils.io.export_formats import write_csv, write_json

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelRow:
    """Qué distingue a cada modelo comparado"""
    name: str
    deconv_layers: int
    previous_saliency: bool
    boundary: bool
    requires: tuple


MODEL_TABLE = (
    ModelRow("SGF1", 2, False, False, ("SGF1",)),
    ModelRow("SGF2", 3, False, False, ("SGF2",)),
    ModelRow("SGF3", 4, False, False, ("SGF3",)),
    ModelRow("OPB", 0, False, True, ()),
    ModelRow("SGF_nb", 3, True, False, ("SGF3", "SGFE")),
    ModelRow("SGFE", 3, True, True, ("SGF3", "SGFE")),
)

METRIC_ROWS = (("sAUC", "s_auc"), ("SIM", "sim"), ("CC", "cc"), ("NSS", "nss"), ("EMD", "emd"))
ABSENT = "absent"


@dataclass
class AblationTable:
    columns: List[str]
    scores: Dict[str, Optional[Dict[str, float]]] = field(default_factory=dict)
    boundary_zeroed: bool = False

    def cell(self, metric_key: str, column: str) -> Optional[float]:
        means = self.scores.get(column)
        return None if means is None else means[metric_key]

    def rows(self) -> List[List[Any]]:
        return [[label] + [ABSENT if self.cell(key, c) is None else self.cell(key, c)
                           for c in self.columns]
                for label, key in METRIC_ROWS]

    def to_dict(self) -> Dict[str, Any]:
        return {'columns': self.columns, 'scores': self.scores,
                'boundary_zeroed': self.boundary_zeroed}


def _scoreable(field_map: Optional[np.ndarray], shape) -> np.ndarray:
    """Un mapa sin masa se sustituye por uno uniforme (puntuación de azar)"""
    if field_map is None or not np.any(field_map > 0):
        return np.full(shape, 0.5)
    return np.clip(field_map, 0.0, 1.0)


def _load_models(params: Dict[str, Union[str, Path]]) -> Dict[str, Model]:
    models = {}
    for variant, path in sorted(params.items()):
        try:
            spec, store = load_params(path)
        except (OSError, ValueError) as e:
            logger.warning(f"Parámetros de {variant} no disponibles: {e}")
            continue
        if spec.variant != variant:
            logger.warning(f"{path} contiene {spec.variant}, no {variant}: se ignora")
            continue
        models[variant] = (spec, store)
    return models


def held_out_clips(clips: Sequence[ClipData], seed: int) -> List[int]:
    """Grupo de prueba de la partición en diez; con menos vídeos se usan todos"""
    if len(clips) < FOLDS:
        logger.warning(f"Solo {len(clips)} vídeos: se evalúan todos")
        return list(range(len(clips)))
    return cross_validation_split(len(clips), seed).test_indices()


def _predict(row: ModelRow, frames: List[np.ndarray], models: Dict[str, Model],
             opb_params: OpbParams, table: AblationTable) -> List[np.ndarray]:
    shape = frames[0].shape[:2]
    if row.name == "OPB":
        boundaries = [None] + boundary_sequence(frames, opb_params)
        return [_scoreable(b, shape) for b in boundaries]
    if row.name in ("SGF_nb", "SGFE"):
        zero = row.name == "SGF_nb"
        result = run_frames(frames, models["SGF3"], models["SGFE"], opb_params, zero_boundary=zero)
        if zero:
            table.boundary_zeroed = all(t.boundary_zeroed for t in result.traces[1:])
        return [_scoreable(m, shape) for m in result.maps]
    result = run_frames(frames, models[row.name], None, opb_params)
    return [_scoreable(m, shape) for m in result.maps]


def run_ablation(dataset: Union[str, Path], params: Dict[str, Union[str, Path]],
                 out: Union[str, Path, None] = None, cfg: EvaluationConfig = None,
                 opb_params: OpbParams = None,
                 clip_indices: Optional[Sequence[int]] = None) -> AblationTable:
    """
    Evalúa las seis columnas sobre los vídeos de prueba. Una columna cuyos
    parámetros faltan queda marcada como ausente y el resto continúa.
    """
    dataset = Path(dataset)
    cfg = cfg or EvaluationConfig()
    opb_params = opb_params or OpbParams()
    clips = load_dataset(dataset)
    if not clips:
        raise ValueError(f"Conjunto de datos vacío: {dataset}")
    indices = list(clip_indices) if clip_indices is not None else held_out_clips(clips, cfg.seed)

    fixation_sets = fixation_sets_from_gaze(load_gaze_csv(dataset / "gaze.csv"),
                                            load_video_meta(dataset / "videos.json"),
                                            load_screen_meta(dataset / "screen.json"))
    pool = negative_pool(((vid, k), fs) for vid in sorted(fixation_sets)
                         for k, fs in fixation_sets[vid].items())
    models = _load_models(params)
    table = AblationTable(columns=[row.name for row in MODEL_TABLE])

    test_clips = [clips[i] for i in indices]
    loaded = {clip.video_id: (clip.load_frames(), clip.load_gt()) for clip in test_clips}

    for row in MODEL_TABLE:
        missing = [v for v in row.requires if v not in models]
        if missing:
            logger.warning(f"Columna {row.name} ausente: faltan {missing}")
            table.scores[row.name] = None
            continue
        per_video = {}
        for clip in test_clips:
            frames, gt = loaded[clip.video_id]
            preds = _predict(row, frames, models, opb_params, table)
            per_video[clip.video_id] = evaluate_video(
                clip.video_id, preds, gt, fixation_sets.get(clip.video_id, {}), pool, cfg)
        table.scores[row.name] = summarize(per_video)['mean']
        logger.info(f"Columna {row.name}: sAUC {table.scores[row.name]['s_auc']:.4f}")

    if out is not None:
        out = Path(out)
        write_csv(out / "ablation.csv", ["metric"] + table.columns, table.rows())
        write_json(out / "ablation.json", table.to_dict())
    return table
