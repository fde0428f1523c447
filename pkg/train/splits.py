"""
Partición en diez grupos para validación cruzada
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

import numpy as np

FOLDS = 10


@dataclass(frozen=True)
class SplitPlan:
    """Grupos disjuntos de índices y el grupo activo de prueba"""
    folds: Tuple[Tuple[int, ...], ...]
    test_fold: int

    def __post_init__(self):
        if not 0 <= self.test_fold < len(self.folds):
            raise ValueError(f"Grupo de prueba fuera de rango: {self.test_fold}")

    def test_indices(self) -> List[int]:
        return sorted(self.folds[self.test_fold])

    def train_indices(self) -> List[int]:
        return sorted(i for k, fold in enumerate(self.folds) if k != self.test_fold for i in fold)

    def with_test_fold(self, test_fold: int) -> 'SplitPlan':
        return SplitPlan(self.folds, test_fold)

    def to_dict(self) -> Dict[str, Any]:
        return {'folds': [list(f) for f in self.folds], 'test_fold': self.test_fold}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SplitPlan':
        return cls(tuple(tuple(int(i) for i in f) for f in data['folds']), int(data['test_fold']))


def cross_validation_split(n: int, seed: int) -> SplitPlan:
    """Permutación uniforme en 10 grupos casi iguales; el grupo de prueba también se sortea"""
    if n < FOLDS:
        raise ValueError(f"Se necesitan al menos {FOLDS} elementos, hay {n}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    folds = tuple(tuple(int(i) for i in chunk) for chunk in np.array_split(order, FOLDS))
    return SplitPlan(folds=folds, test_fold=int(rng.integers(FOLDS)))
