"""
Recorrido completo sobre un conjunto sintético: datos, dos etapas, ablación
"""

import csv
import math
from collections import defaultdict

import pytest

from core.ablation import run_ablation
from core.synthetic import SyntheticSpec, generate_synthetic
from main import main
from metrics.report import EvaluationConfig
from net.serialization import load_params
from utils.io.export_formats import read_json, write_json

NET = {'input_side': 32, 'widths': [4, 4, 8, 8, 8]}


def _losses(log_path):
    by_variant = defaultdict(list)
    with open(log_path, newline='', encoding='utf-8') as f:
        for row in csv.DictReader(f):
            by_variant[row['variant']].append(float(row['loss']))
    return by_variant


@pytest.mark.slow
def test_synthetic_benchmark(tmp_path):
    spec = SyntheticSpec(frame_size=32, object_size=8, speed=1.0, frames_per_clip=8, clips=10,
                         subjects=4, splat_window=5, seed=11)
    data = tmp_path / "data"
    generate_synthetic(spec, data)
    stage_one_cfg = write_json(tmp_path / "stage1.json",
                               {'net': NET, 'opb': {'superpixel_count': 16}})
    stage_two_cfg = write_json(tmp_path / "stage2.json", {
        'train': {'epochs': 10},
        'net': NET,
        'opb': {'superpixel_count': 16},
    })

    params = tmp_path / "stage1" / "sgf3.bin"
    final = tmp_path / "stage2" / "sgfe.bin"
    assert main(["train", "--stage", "1", "--data", str(data), "--out", str(params),
                 "--config", str(stage_one_cfg)]) == 0
    assert main(["train", "--stage", "2", "--data", str(data), "--out", str(final),
                 "--config", str(stage_two_cfg), "--init", str(params)]) == 0
    assert load_params(final)[0].variant == "SGFE"

    # Etapa uno con la configuración por defecto: descenso estricto en las 5 épocas
    stage_one = _losses(params.parent / "train_log.csv")
    for variant in ("SGF1", "SGF2", "SGF3"):
        history = stage_one[variant]
        assert len(history) == 5
        assert all(b < a for a, b in zip(history, history[1:])), (variant, history)

    # Etapa dos: SGFE reduce su pérdida al menos a la mitad
    sgfe = _losses(final.parent / "train_log.csv")["SGFE"]
    assert len(sgfe) == 10
    assert sgfe[-1] <= 0.5 * sgfe[0], sgfe

    split = read_json(params.parent / "manifest.json")['split']
    test_fold = split['folds'][split['test_fold']]

    variants = {
        "SGF1": params.with_name("sgf3.SGF1.bin"),
        "SGF2": params.with_name("sgf3.SGF2.bin"),
        "SGF3": final.with_name("sgfe.SGF3.bin"),
        "SGFE": final,
    }
    table = run_ablation(data, variants, tmp_path / "ablation", EvaluationConfig(emd_grid=8),
                         clip_indices=test_fold)
    assert all(table.scores[name] is not None for name in table.columns)
    assert all(math.isfinite(v) for means in table.scores.values() for v in means.values())
    assert table.boundary_zeroed
    assert 0.0 <= table.scores["OPB"]["s_auc"] <= 1.0

    s_auc = {name: table.scores[name]["s_auc"] for name in table.columns}
    assert s_auc["SGFE"] > 0.6, s_auc
    assert s_auc["SGFE"] >= s_auc["SGF3"], s_auc
    assert s_auc["SGFE"] >= s_auc["SGF_nb"], s_auc
