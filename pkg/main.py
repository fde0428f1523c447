#!/usr/bin/env python3
"""
SalFlow - Punto de entrada principal
Línea de comandos del pipeline de fijaciones oculares en vídeo
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

# Añadir el directorio raiz al path para imports
ROOT_DIR = Path(__file__).parent.absolute()
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from config import (APP_DESCRIPTION, APP_NAME, APP_VERSION, FORMAT_VERSION,  # noqa: E402
                    load_user_config, merge_configs, set_config_value)
from utils.logging_config import setup_logging  # noqa: E402
from utils.io.export_formats import read_json, write_csv, write_json  # noqa: E402

logger = logging.getLogger("salflow.cli")

MANIFEST_NAME = "manifest.json"
TRAIN_LOG_HEADER = ("variant", "epoch", "loss", "wall_ms")
BOUNDARY_TEMPLATE = "boundary_{:06d}.pgm"

Handler = Callable[[argparse.Namespace, Dict[str, Any]], Dict[str, Any]]


# ===========================================
# UTILIDADES
# ===========================================

def write_manifest(out_root: Path, command: str, cfg: Dict[str, Any],
                   seeds: Dict[str, int], extra: Optional[Dict[str, Any]] = None) -> Path:
    """manifest.json con versiones, semillas y configuración resuelta"""
    payload = {
        'app': APP_NAME,
        'version': APP_VERSION,
        'format_version': FORMAT_VERSION,
        'command': command,
        'seeds': seeds,
        'config': cfg,
    }
    if extra:
        payload.update(extra)
    return write_json(Path(out_root) / MANIFEST_NAME, payload)


def apply_overrides(cfg: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Aplica los flags presentes (valor distinto de None) sobre la configuración"""
    for key_path, value in overrides.items():
        if value is not None:
            set_config_value(key_path, value, cfg)
    return cfg


def _opb_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        'opb.theta': getattr(args, 'theta', None),
        'opb.theta_scale': getattr(args, 'theta_q', None),
        'opb.alpha': getattr(args, 'alpha', None),
        'opb.mu': getattr(args, 'mu', None),
        'opb.lambda': getattr(args, 'lam', None),
        'opb.sigma': getattr(args, 'sigma', None),
        'opb.superpixel_count': getattr(args, 'superpixels', None),
        'opb.seed': getattr(args, 'seed', None),
    }


def _parse_assignments(items: Sequence[str]) -> Dict[str, str]:
    """VARIANTE=RUTA repetible"""
    result = {}
    for item in items or ():
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise ValueError(f"Se esperaba VARIANTE=RUTA: {item!r}")
        result[name] = path
    return result


# ===========================================
# SUBCOMANDOS
# ===========================================

def cmd_fixmap(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from fixmap.density import GaussianSplatParams
    from fixmap.gaze import load_gaze_csv, load_screen_meta, load_video_meta
    from fixmap.ground_truth import build_ground_truth, write_ground_truth

    apply_overrides(cfg, {'fixmap.window_w': args.window, 'fixmap.alpha': args.alpha,
                          'fixmap.beta': args.beta})
    params = GaussianSplatParams.from_config(cfg)
    samples = load_gaze_csv(args.gaze)
    videos = load_video_meta(args.videos)
    screen = load_screen_meta(args.screen)

    written = {}
    for video_id in sorted(videos):
        maps = build_ground_truth(samples, videos[video_id], screen, params)
        paths = write_ground_truth(maps, args.out / f"video_{video_id:03d}")
        written[str(video_id)] = len(paths)
    logger.info(f"Mapas de fijación de {len(written)} vídeos en {args.out}")
    return {'out': args.out, 'seeds': {}, 'extra': {'maps_per_video': written}}


def cmd_opb(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from fixmap.density import quantize_map
    from opb.boundary import OpbParams, boundary_sequence
    from utils.io.export_formats import save_pgm
    from utils.io.image_loader import load_frames

    apply_overrides(cfg, _opb_overrides(args))
    params = OpbParams.from_config(cfg)
    frames = load_frames(args.frames)
    if len(frames) < 2:
        raise ValueError(f"Se necesitan al menos dos fotogramas en {args.frames}")

    boundaries = boundary_sequence(frames, params)
    for k, boundary in enumerate(boundaries, start=1):
        save_pgm(quantize_map(boundary), args.out / BOUNDARY_TEMPLATE.format(k))
    logger.info(f"{len(boundaries)} mapas de borde en {args.out}")
    return {'out': args.out, 'seeds': {'opb': params.seed},
            'extra': {'boundaries': len(boundaries)}}


def _train_config_source(path: Optional[Path], base: Dict[str, Any]) -> Dict[str, Any]:
    """El JSON de entrenamiento puede ser una configuración completa o un TrainConfig plano"""
    if path is None:
        return base
    data = read_json(path)
    if not isinstance(data, dict):
        raise ValueError(f"Configuración de entrenamiento no válida: {path}")
    if 'train' in data or 'net' in data or 'opb' in data:
        return merge_configs(base, data)
    return merge_configs(base, {'train': data})


def _training_clips(data_dir: Path, seed: int):
    from train.dataset import load_dataset
    from train.splits import FOLDS, cross_validation_split

    clips = load_dataset(data_dir)
    if not clips:
        raise ValueError(f"Conjunto de datos vacío: {data_dir}")
    if len(clips) < FOLDS:
        logger.warning(f"Solo {len(clips)} vídeos: se entrena con todos")
        return clips, None
    plan = cross_validation_split(len(clips), seed)
    return [clips[i] for i in plan.train_indices()], plan


def cmd_train(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from net.network import NetworkScale
    from net.serialization import load_params, save_params
    from opb.boundary import OpbParams
    from train.dataset import stage_one_pairs, stage_two_pairs
    from train.stages import EpochRecord, StageResult, TrainedModel, run_stage_one, run_stage_two
    from train.train_config import TrainConfig

    cfg = _train_config_source(args.config, cfg)
    apply_overrides(cfg, {'train.stage': args.stage, 'train.seed': args.seed})
    train_cfg = TrainConfig.from_config(cfg)
    if args.published_hparams:
        train_cfg = train_cfg.with_published_hparams()
    scale = NetworkScale.from_config(cfg)
    out_path = Path(args.out)
    out_dir = out_path.parent
    log_path = out_dir / "train_log.csv"

    def on_epoch(record: EpochRecord):
        write_csv(log_path, TRAIN_LOG_HEADER,
                  [(record.variant, record.epoch, record.loss, record.wall_ms)], append=True)

    clips, plan = _training_clips(args.data, train_cfg.seed)
    written = {}
    if train_cfg.stage == 1:
        result = run_stage_one(stage_one_pairs(clips, scale.input_side), train_cfg, scale, on_epoch)
        final = "SGF3"
    else:
        if args.init is None:
            raise ValueError("La etapa dos requiere --init con los parámetros SGF3 de la etapa uno")
        spec, params = load_params(args.init)
        if spec.variant != "SGF3":
            raise ValueError(f"{args.init} contiene {spec.variant}, se esperaba SGF3")
        stage_one = StageResult(models={"SGF3": TrainedModel(spec, params, params.copy())})
        for extra in args.init_extra or ():
            extra_spec, extra_params = load_params(extra)
            stage_one.models[extra_spec.variant] = TrainedModel(extra_spec, extra_params,
                                                                extra_params.copy())
        pairs = stage_two_pairs(clips, spec.scale.input_side, OpbParams.from_config(cfg))
        result = run_stage_two(pairs, stage_one, train_cfg, on_epoch)
        final = "SGFE"

    for variant, model in sorted(result.models.items()):
        path = out_path if variant == final else out_path.with_name(
            f"{out_path.stem}.{variant}{out_path.suffix}")
        save_params(model.params, model.spec, path)
        written[variant] = str(path)

    extra = {'params': written, 'train': train_cfg.to_dict()}
    if plan is not None:
        extra['split'] = plan.to_dict()
    return {'out': out_dir, 'seeds': {'train': train_cfg.seed}, 'extra': extra}


def cmd_infer(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from core.execution_engine import run_frames
    from net.serialization import load_params
    from utils.io.image_loader import load_frames

    spec, params = load_params(args.params)
    if spec.uses_boundary:
        raise ValueError(f"infer admite variantes espaciales; {args.params} contiene {spec.variant}")
    result = run_frames(load_frames(args.frames), (spec, params), None, out_dir=args.out)
    logger.info(f"{spec.variant}: {len(result.maps)} mapas en {args.out}")
    return {'out': args.out, 'seeds': {},
            'extra': {'variant': spec.variant, 'maps': len(result.maps)}}


def _gt_dir(root: Path, video: str) -> Path:
    nested = root / video / "gt"
    return nested if nested.is_dir() else root / video


def cmd_eval(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from fixmap.gaze import load_gaze_csv, load_screen_meta, load_video_meta
    from metrics import (CURVE_HEADER, EvaluationConfig, evaluate_video,
                         fixation_sets_from_gaze, negative_pool, summarize)
    from nodes.outputs.saliency_output import SALIENCY_PREFIX
    from utils.io.image_loader import list_maps, load_unit_map

    apply_overrides(cfg, {'metrics.emd_grid': args.emd_grid, 'metrics.seed': args.seed})
    eval_cfg = EvaluationConfig.from_config(cfg)
    gaze_dir = Path(args.fixations).parent
    videos = load_video_meta(args.videos or gaze_dir / "videos.json")
    screen = load_screen_meta(args.screen or gaze_dir / "screen.json")
    fixation_sets = fixation_sets_from_gaze(load_gaze_csv(args.fixations), videos, screen)
    pool = negative_pool(((vid, k), fs) for vid in sorted(fixation_sets)
                         for k, fs in fixation_sets[vid].items())

    if list_maps(args.pred, SALIENCY_PREFIX):
        gt_dir = args.gt / "gt" if (args.gt / "gt").is_dir() else args.gt
        layout = {args.video_id: (args.pred, gt_dir)}
    else:
        layout = {vid: (args.pred / f"video_{vid:03d}", _gt_dir(args.gt, f"video_{vid:03d}"))
                  for vid in sorted(videos) if (args.pred / f"video_{vid:03d}").is_dir()}
    if not layout:
        raise FileNotFoundError(f"No hay predicciones en {args.pred}")

    per_video = {}
    for vid, (pred_dir, gt_dir) in sorted(layout.items()):
        preds = [load_unit_map(p) for p in list_maps(pred_dir, SALIENCY_PREFIX)]
        gt_maps = [load_unit_map(p) for p in list_maps(gt_dir, "gt")]
        per_video[vid] = evaluate_video(vid, preds, gt_maps, fixation_sets.get(vid, {}),
                                        pool, eval_cfg)

    summary = summarize(per_video)
    curves = summary.pop('curves')
    write_json(args.out, dict(summary, config=eval_cfg.to_dict()))
    if args.curves is not None:
        write_csv(args.curves, CURVE_HEADER, curves.rows())
    logger.info(f"Media del conjunto: {summary['mean']}")
    return {'out': Path(args.out).parent, 'seeds': {'metrics': eval_cfg.seed},
            'extra': {'mean': summary['mean']}}


def cmd_synth(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from core.synthetic import SyntheticSpec, generate_synthetic

    apply_overrides(cfg, {
        'synth.clips': args.clips,
        'synth.frames_per_clip': args.frames,
        'synth.frame_size': args.size,
        'synth.object_kind': args.object,
        'synth.trajectory': args.trajectory,
        'synth.speed': args.speed,
        'synth.noise': args.noise,
        'synth.subjects': args.subjects,
        'synth.seed': args.seed,
    })
    spec = SyntheticSpec.from_config(cfg)
    summary = generate_synthetic(spec, args.out)
    return {'out': args.out, 'seeds': {'synth': spec.seed}, 'extra': {'dataset': summary}}


def cmd_ablate(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from core.ablation import run_ablation
    from metrics import EvaluationConfig
    from opb.boundary import OpbParams

    apply_overrides(cfg, {'metrics.emd_grid': args.emd_grid, 'metrics.seed': args.seed})
    params = {}
    if args.params_dir is not None:
        params.update({p.stem: p for p in sorted(Path(args.params_dir).glob("*.bin"))})
    params.update(_parse_assignments(args.params))
    eval_cfg = EvaluationConfig.from_config(cfg)
    table = run_ablation(args.data, params, args.out, eval_cfg,
                         OpbParams.from_config(cfg), args.clips or None)
    return {'out': args.out, 'seeds': {'metrics': eval_cfg.seed},
            'extra': {'params': {k: str(v) for k, v in params.items()},
                      'boundary_zeroed': table.boundary_zeroed}}


def cmd_pipeline(args: argparse.Namespace, cfg: Dict[str, Any]) -> Dict[str, Any]:
    from core.execution_engine import PipelineConfig, run_pipeline

    apply_overrides(cfg, _opb_overrides(args))
    apply_overrides(cfg, {'pipeline.seed': args.seed})
    pipeline_cfg = PipelineConfig.from_config({
        'sgf3_params': args.sgf3,
        'sgfe_params': args.sgfe,
        'frames_dir': args.frames,
        'out_dir': args.out,
    }, cfg)
    summary = run_pipeline(pipeline_cfg)
    if not summary['videos']:
        raise ValueError(f"Ningún vídeo procesado en {args.frames}")
    return {'out': args.out, 'seeds': {'pipeline': pipeline_cfg.seed, 'opb': pipeline_cfg.opb.seed},
            'extra': {'pipeline': pipeline_cfg.to_dict(), 'summary': summary}}


COMMANDS: Dict[str, Handler] = {
    'fixmap': cmd_fixmap,
    'opb': cmd_opb,
    'train': cmd_train,
    'infer': cmd_infer,
    'eval': cmd_eval,
    'synth': cmd_synth,
    'ablate': cmd_ablate,
    'pipeline': cmd_pipeline,
}


# ===========================================
# ARGUMENTOS
# ===========================================

def _add_opb_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("OPB")
    group.add_argument("--theta", type=float, help="Umbral fijo de gradiente de flujo")
    group.add_argument("--theta-q", type=float, dest="theta_q",
                       help="Factor del umbral adaptativo sobre el percentil 99 (0.1)")
    group.add_argument("--alpha", type=float, help="Ganancia del término de movimiento (0.75)")
    group.add_argument("--mu", type=float, help="Peso del borde previo (0.5)")
    group.add_argument("--lambda", type=float, dest="lam", help="Peso de la propagación (0.5)")
    group.add_argument("--sigma", type=float, help="Umbral de borde previo fiable (0.3)")
    group.add_argument("--superpixels", type=int, help="Número de superpíxeles SLIC (100)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="salflow", description=APP_DESCRIPTION)
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--settings", type=Path,
                        help="JSON de configuración combinado con los valores por defecto")
    parser.add_argument("--log-level", default="INFO",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-file", type=Path, help="Copia del log en archivo")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fixmap", help="Mapas de fijación de referencia a partir de la mirada")
    p.add_argument("--gaze", type=Path, required=True, help="CSV video_id,subject_id,x,y,timestamp_us")
    p.add_argument("--videos", type=Path, required=True, help="JSON de metadatos de vídeo")
    p.add_argument("--screen", type=Path, required=True, help="JSON con la resolución de pantalla")
    p.add_argument("--out", type=Path, required=True, help="Directorio de salida (video_NNN/gt_*.pgm)")
    p.add_argument("--window", type=int, help="Ventana W en píxeles (35)")
    p.add_argument("--alpha", type=float, help="Amplitud de la gaussiana (1.0)")
    p.add_argument("--beta", type=float, help="Decaimiento de la gaussiana (3.0)")

    p = sub.add_parser("opb", help="Mapas de borde de objeto en movimiento")
    p.add_argument("--frames", type=Path, required=True, help="Directorio frame_%%06d.ppm")
    p.add_argument("--out", type=Path, required=True, help="Directorio boundary_%%06d.pgm")
    _add_opb_flags(p)
    p.add_argument("--seed", type=int, help="Semilla de SLIC")

    p = sub.add_parser("train", help="Entrenamiento por etapas de la familia SGF")
    p.add_argument("--stage", type=int, choices=[1, 2], required=True)
    p.add_argument("--data", type=Path, required=True, help="Conjunto video_NNN/{frames,gt,masks}")
    p.add_argument("--out", type=Path, required=True, help="Archivo de parámetros final (.bin)")
    p.add_argument("--config", type=Path,
                   help="JSON de entrenamiento: configuración completa o TrainConfig plano")
    p.add_argument("--init", type=Path, help="Parámetros SGF3 de la etapa uno (etapa dos)")
    p.add_argument("--init-extra", type=Path, nargs="*", dest="init_extra",
                   help="Parámetros SGF1/SGF2 adicionales para el ajuste fino")
    p.add_argument("--paper-hparams", "--published-hparams", action="store_true",
                   dest="published_hparams", help="Hiperparámetros publicados y pérdida sin normalizar por área")
    p.add_argument("--seed", type=int, help="Semilla raíz")

    p = sub.add_parser("infer", help="Inferencia espacial de una variante SGF1/SGF2/SGF3")
    p.add_argument("--frames", type=Path, required=True)
    p.add_argument("--params", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="Directorio sal_%%06d.pgm")

    p = sub.add_parser("eval", help="Métricas sAUC, NSS, CC, SIM, EMD y curvas PR/ROC")
    p.add_argument("--pred", type=Path, required=True, help="sal_*.pgm o video_NNN/sal_*.pgm")
    p.add_argument("--gt", type=Path, required=True, help="gt_*.pgm o video_NNN/[gt/]gt_*.pgm")
    p.add_argument("--fixations", type=Path, required=True, help="CSV de mirada")
    p.add_argument("--videos", type=Path, help="JSON de vídeos (por defecto junto al CSV)")
    p.add_argument("--screen", type=Path, help="JSON de pantalla (por defecto junto al CSV)")
    p.add_argument("--video-id", type=int, default=0, dest="video_id",
                   help="Identificador cuando --pred contiene un único vídeo")
    p.add_argument("--out", type=Path, required=True, help="report.json")
    p.add_argument("--curves", type=Path, help="CSV threshold,precision,tpr,fpr")
    p.add_argument("--emd-grid", type=int, dest="emd_grid", help="Lado de la rejilla de EMD (16)")
    p.add_argument("--seed", type=int, help="Semilla de los negativos del sAUC")

    p = sub.add_parser("synth", help="Conjunto de datos sintético")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--clips", type=int)
    p.add_argument("--frames", type=int, help="Fotogramas por clip")
    p.add_argument("--size", type=int, help="Lado del fotograma")
    p.add_argument("--object", choices=["square", "disc"])
    p.add_argument("--trajectory", choices=["linear", "sinusoidal"])
    p.add_argument("--speed", type=float, help="Píxeles por fotograma")
    p.add_argument("--noise", type=float, help="Nivel de ruido en [0, 1)")
    p.add_argument("--subjects", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("ablate", help="Tabla de ablación sobre los vídeos de prueba")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--params-dir", type=Path, dest="params_dir",
                   help="Directorio con VARIANTE.bin (SGF1, SGF2, SGF3, SGFE)")
    p.add_argument("--params", nargs="*", default=[], metavar="VARIANTE=RUTA")
    p.add_argument("--clips", type=int, nargs="*", help="Índices de vídeo a evaluar")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--emd-grid", type=int, dest="emd_grid")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("pipeline", help="SGF3 en el primer fotograma y SGFE en los siguientes")
    p.add_argument("--frames", type=Path, required=True,
                   help="Directorio de fotogramas o conjunto video_NNN/frames")
    p.add_argument("--sgf3", type=Path, required=True)
    p.add_argument("--sgfe", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)
    _add_opb_flags(p)
    p.add_argument("--seed", type=int)

    return parser


def _jsonable(value: Any) -> Any:
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def main(argv: Optional[List[str]] = None) -> int:
    """Ejecuta un subcomando; 0 si termina bien, 1 con una línea JSON de error"""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(getattr(logging, args.log_level), args.log_file)

    try:
        cfg = load_user_config(args.settings)
        outcome = COMMANDS[args.command](args, cfg)
        write_manifest(outcome['out'], args.command, _jsonable(cfg), outcome['seeds'],
                       _jsonable(outcome.get('extra')))
    except Exception as e:
        logger.error(f"Fallo en {args.command}: {e}")
        logger.debug("Traza del error", exc_info=True)
        print(json.dumps({'status': 'error', 'command': args.command,
                          'error': type(e).__name__, 'message': str(e)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
