"""
Métricas de evaluación de saliencia
"""

from metrics.curves import (CURVE_HEADER, CurveData, binary_from_density, combine_curves,
                            pr_roc_curves, roc_auc, to_eight_bit)
from metrics.distribution import TransportError, cc, emd, sim, transport_cost
from metrics.fixation_metrics import (FixationSet, negative_pool, nss, pool_excluding,
                                      sample_shuffled_negatives, shuffled_auc)
from metrics.report import (EvaluationConfig, FrameEvaluation, MetricReport, average_reports,
                            evaluate, evaluate_video, fixation_sets_from_gaze, summarize)

__all__ = [
    'CURVE_HEADER', 'CurveData', 'binary_from_density', 'combine_curves', 'pr_roc_curves',
    'roc_auc', 'to_eight_bit', 'TransportError', 'cc', 'emd', 'sim', 'transport_cost',
    'FixationSet', 'negative_pool', 'nss', 'pool_excluding', 'sample_shuffled_negatives',
    'shuffled_auc', 'EvaluationConfig', 'FrameEvaluation', 'MetricReport', 'average_reports',
    'evaluate', 'evaluate_video', 'fixation_sets_from_gaze', 'summarize',
]
