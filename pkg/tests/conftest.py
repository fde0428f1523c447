"""
Fixtures compartidas por las pruebas
"""

import pytest

from core.synthetic import generate_synthetic
from net.serialization import save_params
from tests.helpers import TINY_SYNTH, tiny_model


@pytest.fixture
def models():
    return {variant: tiny_model(variant, seed)
            for seed, variant in enumerate(("SGF1", "SGF2", "SGF3", "SGFE"))}


@pytest.fixture
def param_files(tmp_path, models):
    paths = {}
    for variant, (spec, params) in models.items():
        paths[variant] = tmp_path / "params" / f"{variant}.bin"
        save_params(params, spec, paths[variant])
    return paths


@pytest.fixture
def synthetic_dataset(tmp_path):
    root = tmp_path / "synth"
    generate_synthetic(TINY_SYNTH, root)
    return root
