"""
Entrenamiento escalonado: etapa uno (SGF1 -> SGF2 -> SGF3) y
etapa dos (ajuste fino y variante temporal SGFE)
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from net.network import NetworkScale, NetworkSpec, ParamStore, backward, build_sgf, forward
from train.dataset import SamplePair, spatial_view
from train.losses import loss_l1, loss_l2
from train.optim import sgd_step
from train.train_config import TrainConfig
from train.transfer import transfer_params, trunk_snapshot
from utils.performance import Stopwatch
from utils.seeding import make_rng

logger = logging.getLogger(__name__)

STAGE_ONE_VARIANTS = ("SGF1", "SGF2", "SGF3")


class TrainingDivergedError(RuntimeError):
    """Pérdida no finita durante el entrenamiento"""

    def __init__(self, variant: str, epoch: int, sample: int, value: float):
        super().__init__(
            f"Entrenamiento divergente: {variant}, época {epoch}, muestra {sample}, pérdida {value}"
        )
        self.variant = variant
        self.epoch = epoch
        self.sample = sample


@dataclass(frozen=True)
class EpochRecord:
    variant: str
    epoch: int
    loss: float
    wall_ms: float


EpochCallback = Callable[[EpochRecord], None]
LossFn = Callable[[np.ndarray, np.ndarray], Tuple[float, np.ndarray]]


@dataclass
class TrainedModel:
    spec: NetworkSpec
    params: ParamStore
    initial_params: ParamStore
    history: List[float] = field(default_factory=list)


@dataclass
class StageResult:
    models: Dict[str, TrainedModel] = field(default_factory=dict)
    initial_trunks: Dict[str, Dict[str, np.ndarray]] = field(default_factory=dict)

    def params(self, variant: str) -> ParamStore:
        if variant not in self.models:
            raise KeyError(f"Variante no entrenada: {variant}")
        return self.models[variant].params


def stage_loss(cfg: TrainConfig) -> LossFn:
    """Cuadrática en la etapa uno; cuadrática + entropía cruzada en la dos"""
    if cfg.stage == 1:
        return loss_l1
    return lambda p, g: loss_l2(p, g, cfg.eta)


# ===========================================
# BUCLE DE ENTRENAMIENTO
# ===========================================

def train_variant(spec: NetworkSpec, params: ParamStore, pairs: List[SamplePair],
                  cfg: TrainConfig, loss_fn: LossFn,
                  on_epoch: Optional[EpochCallback] = None) -> List[float]:
    """
    SGD por mini-lotes; la pérdida del lote es la media por muestra.
    Devuelve la pérdida media de cada época.
    """
    if not pairs:
        raise ValueError("Conjunto de entrenamiento vacío")
    order_rng = make_rng(cfg.seed, f"order/{spec.variant}/stage{cfg.stage}")
    flip_rng = make_rng(cfg.seed, f"hflip/{spec.variant}/stage{cfg.stage}")
    history = []

    for epoch in range(1, cfg.epochs + 1):
        watch = Stopwatch()
        order = order_rng.permutation(len(pairs))
        flips = flip_rng.random(len(pairs)) < 0.5 if cfg.hflip else np.zeros(len(pairs), dtype=bool)
        total = 0.0

        for start in range(0, len(order), cfg.batch_size):
            batch = order[start:start + cfg.batch_size]
            accumulated: Dict[str, np.ndarray] = {}
            for idx in batch:
                sample = pairs[idx].flipped() if flips[idx] else pairs[idx]
                x, aux = sample.network_input(spec)
                pred, cache = forward(spec, params, x, aux)
                value, grad = loss_fn(pred, sample.target)
                if cfg.normalize_by_area:
                    value, grad = value / sample.area, grad / sample.area
                if not math.isfinite(value) or not np.all(np.isfinite(grad)):
                    raise TrainingDivergedError(spec.variant, epoch, int(idx), value)
                total += value
                for name, g in backward(spec, params, cache, grad).items():
                    if name in accumulated:
                        accumulated[name] += g
                    else:
                        accumulated[name] = g.copy()
            scale = 1.0 / len(batch)
            sgd_step(params, {n: g * scale for n, g in accumulated.items()}, cfg)

        mean_loss = total / len(pairs)
        history.append(mean_loss)
        record = EpochRecord(spec.variant, epoch, mean_loss, watch.elapsed_ms())
        logger.info(f"{spec.variant} época {epoch}/{cfg.epochs}: pérdida {mean_loss:.6f} "
                    f"({record.wall_ms:.0f} ms)")
        if on_epoch:
            on_epoch(record)

    return history


# ===========================================
# ETAPAS
# ===========================================

def run_stage_one(pairs: List[SamplePair], cfg: TrainConfig, scale: NetworkScale = None,
                  on_epoch: Optional[EpochCallback] = None) -> StageResult:
    """
    SGF1 desde inicialización gaussiana; SGF2 y SGF3 parten del tronco
    entrenado de la variante anterior.
    """
    if not pairs:
        raise ValueError("La etapa uno requiere muestras")
    scale = scale or NetworkScale()
    cfg_one = cfg if cfg.stage == 1 else TrainConfig.from_dict(dict(cfg.to_dict(), stage=1))
    result = StageResult()
    previous: Optional[TrainedModel] = None

    for variant in STAGE_ONE_VARIANTS:
        spec = build_sgf(variant, scale)
        init_rng = make_rng(cfg_one.seed, f"init/{variant}")
        if previous is None:
            params = ParamStore.initialize(spec, init_rng)
        else:
            params = transfer_params(previous.params, previous.spec, spec, init_rng)
        result.initial_trunks[variant] = trunk_snapshot(spec, params)
        initial = params.copy()

        history = train_variant(spec, params, pairs, cfg_one, stage_loss(cfg_one), on_epoch)
        previous = TrainedModel(spec, params, initial, history)
        result.models[variant] = previous

    return result


def run_stage_two(pairs: List[SamplePair], stage_one: StageResult, cfg: TrainConfig,
                  on_epoch: Optional[EpochCallback] = None) -> StageResult:
    """
    Ajuste fino de las variantes espaciales configuradas y entrenamiento de
    SGFE con el tronco transferido desde SGF3.
    """
    if not pairs:
        raise ValueError("La etapa dos requiere muestras")
    if "SGF3" not in stage_one.models:
        raise KeyError("La etapa dos requiere los parámetros de SGF3 de la etapa uno")
    cfg_two = cfg if cfg.stage == 2 else TrainConfig.from_dict(dict(cfg.to_dict(), stage=2))
    loss_fn = stage_loss(cfg_two)
    result = StageResult()

    spatial = spatial_view(pairs)
    for variant in cfg_two.finetune_variants:
        base = stage_one.models[variant]
        params = base.params.copy()
        initial = params.copy()
        result.initial_trunks[variant] = trunk_snapshot(base.spec, params)
        history = train_variant(base.spec, params, spatial, cfg_two, loss_fn, on_epoch)
        result.models[variant] = TrainedModel(base.spec, params, initial, history)

    source = result.models.get("SGF3", stage_one.models["SGF3"])
    spec = build_sgf("SGFE", source.spec.scale)
    params = transfer_params(source.params, source.spec, spec, make_rng(cfg_two.seed, "init/SGFE"))
    result.initial_trunks["SGFE"] = trunk_snapshot(spec, params)
    initial = params.copy()
    history = train_variant(spec, params, pairs, cfg_two, loss_fn, on_epoch)
    result.models["SGFE"] = TrainedModel(spec, params, initial, history)
    return result
