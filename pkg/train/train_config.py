"""
Hiperparámetros de entrenamiento
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Tuple

from config import get_config_value

# Valores publicados para entradas de 500x500 sin normalizar por área
PUBLISHED_HPARAMS = {
    1: {'learning_rate': 1e-10, 'momentum': 0.99, 'weight_decay': 5e-4},
    2: {'learning_rate': 1e-11, 'momentum': 0.999, 'weight_decay': 5e-5},
}


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    momentum: float = 0.9
    weight_decay: float = 5e-4
    eta: float = 1.0
    epochs: int = 5
    batch_size: int = 4
    seed: int = 0
    stage: int = 1
    normalize_by_area: bool = True
    hflip: bool = False
    finetune_variants: Tuple[str, ...] = field(default=("SGF3",))

    def __post_init__(self):
        object.__setattr__(self, 'finetune_variants', tuple(self.finetune_variants))
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate debe ser positivo: {self.learning_rate}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum fuera de [0, 1): {self.momentum}")
        if self.weight_decay < 0 or self.eta < 0:
            raise ValueError("weight_decay y eta deben ser >= 0")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs y batch_size deben ser >= 1")
        if self.stage not in (1, 2):
            raise ValueError(f"stage debe ser 1 o 2: {self.stage}")
        unknown = set(self.finetune_variants) - {"SGF1", "SGF2", "SGF3"}
        if unknown:
            raise ValueError(f"Variantes de ajuste fino no válidas: {sorted(unknown)}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'TrainConfig':
        values = dict(data)
        if 'lr' in values:
            values['learning_rate'] = values.pop('lr')
        known = {k: v for k, v in values.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    @classmethod
    def from_config(cls, source: dict = None) -> 'TrainConfig':
        return cls.from_dict(get_config_value('train', {}, source))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['finetune_variants'] = list(self.finetune_variants)
        return data

    def with_published_hparams(self) -> 'TrainConfig':
        """Mismos campos con los valores publicados de la etapa y pérdida sin normalizar"""
        return replace(self, normalize_by_area=False, **PUBLISHED_HPARAMS[self.stage])

    @classmethod
    def published_hparams(cls, stage: int) -> 'TrainConfig':
        return cls(stage=stage).with_published_hparams()
