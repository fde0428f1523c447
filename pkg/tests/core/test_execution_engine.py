"""
Pruebas del pipeline por vídeo: SGF3 en el primer fotograma, SGFE después
"""

import pytest

from core.execution_engine import (PipelineConfig, build_pipeline, discover_videos, run_frames,
                                   run_pipeline, run_video)
from tests.helpers import FAST_OPB, moving_frames, write_video


class TestRunFrames:

    def test_single_frame_uses_spatial_variant(self, models):
        result = run_frames(moving_frames(1), models["SGF3"], models["SGFE"], FAST_OPB)
        assert len(result.maps) == 1
        assert result.traces[0].variant == "SGF3"
        assert not result.traces[0].used_previous

    def test_second_frame_consumes_previous_and_boundary(self, models):
        result = run_frames(moving_frames(2), models["SGF3"], models["SGFE"], FAST_OPB)
        first, second = result.traces
        assert first.variant == "SGF3"
        assert second.variant == "SGFE"
        assert second.used_previous and second.used_boundary
        assert not second.boundary_zeroed

    def test_maps_match_frame_dims(self, models):
        frames = moving_frames(3, size=(20, 24))
        result = run_frames(frames, models["SGF3"], models["SGFE"], FAST_OPB)
        assert len(result.maps) == len(frames)
        for m in result.maps:
            assert m.shape == (20, 24)
            assert m.min() >= 0.0 and m.max() <= 1.0

    def test_zero_boundary_trace(self, models):
        result = run_frames(moving_frames(3), models["SGF3"], models["SGFE"], FAST_OPB,
                            zero_boundary=True)
        assert all(t.boundary_zeroed and not t.used_boundary for t in result.traces[1:])

    def test_spatial_only(self, models):
        result = run_frames(moving_frames(3), models["SGF1"], None)
        assert [t.variant for t in result.traces] == ["SGF1"] * 3

    def test_keep_boundaries(self, models):
        result = run_frames(moving_frames(3), models["SGF3"], models["SGFE"], FAST_OPB,
                            keep_boundaries=True)
        assert result.boundaries[0] is None
        assert all(b.shape == (20, 24) for b in result.boundaries[1:])

    def test_empty_video(self, models):
        with pytest.raises(ValueError):
            run_frames([], models["SGF3"], models["SGFE"])

    def test_shape_change_rejected(self, models):
        frames = moving_frames(1) + moving_frames(1, size=(16, 16))
        with pytest.raises(ValueError):
            run_frames(frames, models["SGF3"], models["SGFE"], FAST_OPB)

    def test_deterministic_files(self, tmp_path, models):
        frames = moving_frames(3)
        first = run_frames(frames, models["SGF3"], models["SGFE"], FAST_OPB, out_dir=tmp_path / "a")
        second = run_frames(frames, models["SGF3"], models["SGFE"], FAST_OPB, out_dir=tmp_path / "b")
        assert [p.name for p in first.paths] == ["sal_000000.pgm", "sal_000001.pgm", "sal_000002.pgm"]
        for a, b in zip(first.paths, second.paths):
            assert a.read_bytes() == b.read_bytes()


class TestPipelineGraph:

    def test_reset_clears_video_state(self, models):
        pipeline = build_pipeline(models["SGF3"], models["SGFE"], FAST_OPB)
        for frame in moving_frames(2):
            pipeline.source.push(frame)
            pipeline.output.get_output_value("count")
        assert pipeline.saliency.previous_saliency is not None
        assert pipeline.boundary.previous_boundary is not None

        pipeline.reset()
        assert pipeline.saliency.previous_saliency is None
        assert pipeline.boundary.previous_boundary is None
        assert pipeline.source.index == -1
        assert pipeline.output.maps == []

    def test_reset_restarts_with_spatial_variant(self, models):
        pipeline = build_pipeline(models["SGF3"], models["SGFE"], FAST_OPB)
        frames = moving_frames(2)
        for frame in frames:
            pipeline.source.push(frame)
            pipeline.output.get_output_value("count")
        pipeline.reset()
        pipeline.source.push(frames[1])
        pipeline.output.get_output_value("count")
        assert pipeline.output.traces[0].variant == "SGF3"

    def test_execution_order(self, models):
        pipeline = build_pipeline(models["SGF3"], models["SGFE"], FAST_OPB)
        order = pipeline.graph.get_execution_order()
        assert order[0] is pipeline.source
        assert order[-1] is pipeline.output
        assert order.index(pipeline.boundary) < order.index(pipeline.saliency)


class TestPipelineConfig:

    def test_missing_params(self, tmp_path, param_files):
        with pytest.raises(FileNotFoundError):
            PipelineConfig(tmp_path / "none.bin", param_files["SGFE"], tmp_path, tmp_path)

    def test_variant_mismatch(self, tmp_path, param_files):
        cfg = PipelineConfig(param_files["SGF1"], param_files["SGFE"], tmp_path, tmp_path)
        with pytest.raises(ValueError):
            cfg.load_models()

    def test_round_trip(self, tmp_path, param_files):
        cfg = PipelineConfig(param_files["SGF3"], param_files["SGFE"], tmp_path, tmp_path / "out",
                             FAST_OPB, seed=4)
        assert PipelineConfig.from_dict(cfg.to_dict()) == cfg

    def test_from_config_reads_opb_section(self, tmp_path, param_files):
        cfg = PipelineConfig.from_config(
            {'sgf3_params': param_files["SGF3"], 'sgfe_params': param_files["SGFE"],
             'frames_dir': tmp_path, 'out_dir': tmp_path},
            {'opb': {'sigma': 0.4, 'lambda': 0.2}, 'pipeline': {'seed': 9}})
        assert cfg.opb.sigma == 0.4 and cfg.opb.lam == 0.2
        assert cfg.seed == 9


class TestRunPipeline:

    def test_run_video_writes_maps(self, tmp_path, param_files):
        cfg = PipelineConfig(param_files["SGF3"], param_files["SGFE"], tmp_path, tmp_path / "out",
                             FAST_OPB)
        result = run_video(moving_frames(2), cfg, out_dir=tmp_path / "out")
        assert len(result.paths) == 2
        assert all(p.exists() for p in result.paths)

    def test_discover_single_directory(self, tmp_path):
        frames_dir = write_video(tmp_path / "frames", moving_frames(1))
        assert discover_videos(frames_dir) == [frames_dir]

    def test_discover_dataset(self, tmp_path):
        for vid in (1, 0):
            write_video(tmp_path / f"video_{vid:03d}" / "frames", moving_frames(1))
        assert [p.parent.name for p in discover_videos(tmp_path)] == ["video_000", "video_001"]

    def test_failed_video_does_not_stop_others(self, tmp_path, param_files):
        root = tmp_path / "data"
        write_video(root / "video_000" / "frames", moving_frames(2))
        (root / "video_001" / "frames").mkdir(parents=True)
        write_video(root / "video_002" / "frames", moving_frames(1))
        cfg = PipelineConfig(param_files["SGF3"], param_files["SGFE"], root, tmp_path / "out",
                             FAST_OPB)

        summary = run_pipeline(cfg)
        assert [v['video'] for v in summary['videos']] == ["video_000", "video_002"]
        assert summary['videos'][0]['variants'] == ["SGF3", "SGFE"]
        assert [e['video'] for e in summary['errors']] == ["video_001"]
        assert (tmp_path / "out" / "video_002" / "sal_000000.pgm").exists()

    def test_rerun_bitwise_identical(self, tmp_path, param_files):
        frames_dir = write_video(tmp_path / "frames", moving_frames(3))
        outputs = []
        for name in ("a", "b"):
            cfg = PipelineConfig(param_files["SGF3"], param_files["SGFE"], frames_dir,
                                 tmp_path / name, FAST_OPB)
            run_pipeline(cfg)
            outputs.append(sorted((tmp_path / name).glob("sal_*.pgm")))
        assert len(outputs[0]) == 3
        for a, b in zip(*outputs):
            assert a.read_bytes() == b.read_bytes()
