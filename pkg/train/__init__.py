"""
Entrenamiento escalonado de las variantes SGF
"""

from train.dataset import ClipData, SamplePair, load_dataset, stage_one_pairs, stage_two_pairs
from train.losses import loss_l1, loss_l2
from train.optim import sgd_step
from train.splits import SplitPlan, cross_validation_split
from train.stages import (EpochRecord, StageResult, TrainedModel, TrainingDivergedError,
                          run_stage_one, run_stage_two, train_variant)
from train.train_config import TrainConfig
from train.transfer import transfer_params, trunk_names, trunk_snapshot

__all__ = [
    'ClipData', 'SamplePair', 'load_dataset', 'stage_one_pairs', 'stage_two_pairs',
    'loss_l1', 'loss_l2', 'sgd_step', 'SplitPlan', 'cross_validation_split',
    'EpochRecord', 'StageResult', 'TrainedModel', 'TrainingDivergedError',
    'run_stage_one', 'run_stage_two', 'train_variant', 'TrainConfig',
    'transfer_params', 'trunk_names', 'trunk_snapshot',
]
