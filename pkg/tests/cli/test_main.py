"""
Pruebas de la línea de comandos: subcomandos, manifiestos y errores
"""

import csv
import json
import logging

import pytest

from main import build_parser, main
from tests.helpers import TINY_SYNTH
from utils.io.export_formats import read_json, write_json

SYNTH_FLAGS = ["--clips", "3", "--frames", "4", "--size", "24", "--speed", "1", "--subjects", "3",
               "--seed", "5"]
TINY_CONFIG = {
    'train': {'epochs': 1, 'batch_size': 4, 'learning_rate': 0.05},
    'net': {'input_side': 16, 'widths': [2, 2, 2, 2, 2]},
    'opb': {'superpixel_count': 8, 'flow_iterations': 10, 'flow_levels': 2},
    'synth': {'object_size': 6, 'splat_window': 4},
}


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def settings(tmp_path):
    return write_json(tmp_path / "settings.json", TINY_CONFIG)


@pytest.fixture
def dataset(tmp_path, settings):
    out = tmp_path / "data"
    assert main(["--settings", str(settings), "synth", "--out", str(out)] + SYNTH_FLAGS) == 0
    return out


def _last_error(capsys):
    lines = capsys.readouterr().err.strip().splitlines()
    return json.loads(lines[-1])


class TestParser:

    def test_help_documents_subcommands(self, capsys):
        with pytest.raises(SystemExit) as exit_info:
            build_parser().parse_args(["--help"])
        assert exit_info.value.code == 0
        out = capsys.readouterr().out
        for command in ("fixmap", "opb", "train", "infer", "eval", "synth", "ablate", "pipeline"):
            assert command in out

    def test_opb_flags(self):
        args = build_parser().parse_args(["opb", "--frames", "f", "--out", "o", "--theta-q", "0.2",
                                          "--lambda", "0.3", "--superpixels", "50"])
        assert args.theta_q == 0.2 and args.lam == 0.3 and args.superpixels == 50

    def test_hparams_flag_spellings(self):
        for flag in ("--paper-hparams", "--published-hparams"):
            args = build_parser().parse_args(["train", "--stage", "1", "--data", "d",
                                              "--out", "p.bin", flag])
            assert args.published_hparams is True

    def test_train_requires_stage(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["train", "--data", "d", "--out", "p.bin"])


class TestSynthAndFixmap:

    def test_synth_manifest(self, dataset):
        manifest = read_json(dataset / "manifest.json")
        assert manifest['command'] == "synth"
        assert manifest['app'] == "SalFlow"
        assert manifest['seeds'] == {'synth': 5}
        assert manifest['config']['synth']['clips'] == 3
        assert sorted(p.name for p in dataset.glob("video_*")) == ["video_000", "video_001",
                                                                    "video_002"]

    def test_synth_matches_library(self, tmp_path, dataset):
        from core.synthetic import generate_synthetic
        generate_synthetic(TINY_SYNTH, tmp_path / "library")
        frame = "video_001/frames/frame_000002.ppm"
        assert (dataset / frame).read_bytes() == (tmp_path / "library" / frame).read_bytes()

    def test_fixmap_reproduces_dataset_gt(self, tmp_path, dataset):
        out = tmp_path / "fixmaps"
        code = main(["fixmap", "--gaze", str(dataset / "gaze.csv"),
                     "--videos", str(dataset / "videos.json"),
                     "--screen", str(dataset / "screen.json"),
                     "--out", str(out), "--window", "4"])
        assert code == 0
        for produced in sorted((out / "video_000").glob("gt_*.pgm")):
            original = dataset / "video_000" / "gt" / produced.name
            assert produced.read_bytes() == original.read_bytes()
        assert read_json(out / "manifest.json")['config']['fixmap']['window_w'] == 4


class TestOpbCommand:

    def test_writes_boundaries(self, tmp_path, settings, dataset):
        out = tmp_path / "opb"
        code = main(["--settings", str(settings), "opb",
                     "--frames", str(dataset / "video_000" / "frames"),
                     "--out", str(out), "--theta-q", "0.2", "--seed", "3"])
        assert code == 0
        assert [p.name for p in sorted(out.glob("boundary_*.pgm"))] == [
            "boundary_000001.pgm", "boundary_000002.pgm", "boundary_000003.pgm"]
        manifest = read_json(out / "manifest.json")
        assert manifest['config']['opb']['theta_scale'] == 0.2
        assert manifest['seeds'] == {'opb': 3}

    def test_single_frame_fails(self, tmp_path, dataset, capsys):
        frames = tmp_path / "one"
        frames.mkdir()
        source = dataset / "video_000" / "frames" / "frame_000000.ppm"
        (frames / source.name).write_bytes(source.read_bytes())
        assert main(["opb", "--frames", str(frames), "--out", str(tmp_path / "o")]) == 1
        error = _last_error(capsys)
        assert error['status'] == "error" and error['command'] == "opb"
        assert error['error'] == "ValueError"


class TestTrainAndInference:

    def test_stage_one_then_stage_two(self, tmp_path, settings, dataset):
        out = tmp_path / "model" / "params.bin"
        assert main(["train", "--stage", "1", "--data", str(dataset), "--out", str(out),
                     "--config", str(settings), "--seed", "2"]) == 0
        assert out.exists() and out.with_suffix(".json").exists()
        for variant in ("SGF1", "SGF2"):
            assert (out.parent / f"params.{variant}.bin").exists()
        with open(out.parent / "train_log.csv", newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        assert rows[0] == ["variant", "epoch", "loss", "wall_ms"]
        assert [r[0] for r in rows[1:]] == ["SGF1", "SGF2", "SGF3"]
        assert read_json(out.parent / "manifest.json")['seeds'] == {'train': 2}

        final = tmp_path / "model" / "sgfe.bin"
        assert main(["train", "--stage", "2", "--data", str(dataset), "--out", str(final),
                     "--config", str(settings), "--init", str(out)]) == 0
        assert read_json(final.with_suffix(".json"))['variant'] == "SGFE"
        assert (final.parent / "sgfe.SGF3.bin").exists()

    def test_flat_train_config(self, tmp_path, dataset):
        flat = write_json(tmp_path / "flat.json", {'epochs': 1, 'batch_size': 8})
        settings = write_json(tmp_path / "net.json", {'net': TINY_CONFIG['net']})
        out = tmp_path / "flat" / "params.bin"
        assert main(["--settings", str(settings), "train", "--stage", "1", "--data", str(dataset),
                     "--out", str(out), "--config", str(flat)]) == 0
        manifest = read_json(out.parent / "manifest.json")
        assert manifest['train']['batch_size'] == 8
        assert manifest['train']['epochs'] == 1

    @pytest.mark.parametrize("flag", ["--paper-hparams", "--published-hparams"])
    def test_published_hparams_recorded(self, tmp_path, settings, dataset, flag):
        out = tmp_path / "published" / "params.bin"
        assert main(["train", "--stage", "1", "--data", str(dataset), "--out", str(out),
                     "--config", str(settings), flag]) == 0
        train = read_json(out.parent / "manifest.json")['train']
        assert train['learning_rate'] == 1e-10
        assert train['momentum'] == 0.99
        assert train['normalize_by_area'] is False

    def test_stage_two_needs_init(self, tmp_path, settings, dataset, capsys):
        code = main(["train", "--stage", "2", "--data", str(dataset),
                     "--out", str(tmp_path / "p.bin"), "--config", str(settings)])
        assert code == 1
        assert _last_error(capsys)['command'] == "train"

    def test_infer_spatial_variant(self, tmp_path, dataset, param_files):
        out = tmp_path / "infer"
        assert main(["infer", "--frames", str(dataset / "video_000" / "frames"),
                     "--params", str(param_files["SGF2"]), "--out", str(out)]) == 0
        assert len(list(out.glob("sal_*.pgm"))) == 4
        assert read_json(out / "manifest.json")['variant'] == "SGF2"

    def test_infer_rejects_temporal_variant(self, tmp_path, dataset, param_files, capsys):
        assert main(["infer", "--frames", str(dataset / "video_000" / "frames"),
                     "--params", str(param_files["SGFE"]), "--out", str(tmp_path / "x")]) == 1
        assert _last_error(capsys)['error'] == "ValueError"


class TestPipelineEvalAblate:

    def test_pipeline_then_eval(self, tmp_path, dataset, param_files):
        pred = tmp_path / "pred"
        assert main(["pipeline", "--frames", str(dataset), "--sgf3", str(param_files["SGF3"]),
                     "--sgfe", str(param_files["SGFE"]), "--out", str(pred),
                     "--superpixels", "8"]) == 0
        assert len(list((pred / "video_002").glob("sal_*.pgm"))) == 4
        summary = read_json(pred / "manifest.json")['summary']
        assert [v['video'] for v in summary['videos']] == ["video_000", "video_001", "video_002"]

        report = tmp_path / "eval" / "report.json"
        curves = tmp_path / "eval" / "curves.csv"
        assert main(["eval", "--pred", str(pred), "--gt", str(dataset),
                     "--fixations", str(dataset / "gaze.csv"), "--out", str(report),
                     "--curves", str(curves), "--emd-grid", "4", "--seed", "1"]) == 0
        payload = read_json(report)
        assert set(payload['mean']) == {"s_auc", "nss", "cc", "sim", "emd"}
        assert sorted(payload['per_video']) == ["0", "1", "2"]
        assert payload['config']['emd_grid'] == 4
        with open(curves, newline='', encoding='utf-8') as f:
            assert len(list(csv.reader(f))) == 257

    def test_eval_single_video_directory(self, tmp_path, dataset, param_files):
        pred = tmp_path / "pred"
        assert main(["infer", "--frames", str(dataset / "video_001" / "frames"),
                     "--params", str(param_files["SGF3"]), "--out", str(pred)]) == 0
        report = tmp_path / "report.json"
        assert main(["eval", "--pred", str(pred), "--gt", str(dataset / "video_001"),
                     "--fixations", str(dataset / "gaze.csv"), "--video-id", "1",
                     "--out", str(report), "--emd-grid", "4"]) == 0
        assert list(read_json(report)['per_video']) == ["1"]

    def test_eval_reruns_identical(self, tmp_path, dataset, param_files):
        pred = tmp_path / "pred"
        main(["infer", "--frames", str(dataset / "video_000" / "frames"),
              "--params", str(param_files["SGF1"]), "--out", str(pred)])
        for name in ("a.json", "b.json"):
            assert main(["eval", "--pred", str(pred), "--gt", str(dataset / "video_000"),
                         "--fixations", str(dataset / "gaze.csv"), "--out", str(tmp_path / name),
                         "--emd-grid", "4", "--seed", "7"]) == 0
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_ablate(self, tmp_path, settings, dataset, param_files):
        out = tmp_path / "ablation"
        assert main(["--settings", str(settings), "ablate", "--data", str(dataset),
                     "--params-dir", str(param_files["SGF1"].parent),
                     "--out", str(out), "--emd-grid", "4"]) == 0
        with open(out / "ablation.csv", newline='', encoding='utf-8') as f:
            rows = list(csv.reader(f))
        assert len(rows) == 6 and len(rows[0]) == 7
        assert read_json(out / "manifest.json")['boundary_zeroed'] is True

    def test_bad_params_assignment(self, tmp_path, dataset, capsys):
        assert main(["ablate", "--data", str(dataset), "--params", "SGF1",
                     "--out", str(tmp_path / "a")]) == 1
        assert _last_error(capsys) == {
            'status': "error", 'command': "ablate", 'error': "ValueError",
            'message': "Se esperaba VARIANTE=RUTA: 'SGF1'",
        }

    def test_missing_settings_file(self, tmp_path, capsys):
        assert main(["--settings", str(tmp_path / "none.json"), "synth",
                     "--out", str(tmp_path / "s")]) == 1
        assert _last_error(capsys)['error'] == "FileNotFoundError"
