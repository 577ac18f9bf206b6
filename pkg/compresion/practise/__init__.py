from .latency import MIN_REPORTED_TRIALS, TAU_FLOOR, LatencyStats, latency_ratio, measure_latency
from .scoring import (
    MIMIC_MAX_GRAD_NORM, BlockScore, Recovery, block_seed, feature_distance, fit_adaptors, mimic_beta,
    pruning_score, rank_blocks, recoverability, train_adaptors,
)
from .finetune import (
    BP, FEATURE_MIMIC, KD, METHODS, SCOPE_ADAPTORS, SCOPE_ALL, SCOPES, FinetuneConfig, finetune,
)
from .pipeline import (
    PractiseConfig, PractiseReport, practise_compress, recoverability_consistency, score_blocks,
)

__all__ = [
    'MIN_REPORTED_TRIALS', 'TAU_FLOOR', 'LatencyStats', 'latency_ratio', 'measure_latency',
    'MIMIC_MAX_GRAD_NORM', 'BlockScore', 'Recovery', 'block_seed', 'feature_distance', 'fit_adaptors',
    'mimic_beta', 'pruning_score', 'rank_blocks', 'recoverability', 'train_adaptors',
    'BP', 'FEATURE_MIMIC', 'KD', 'METHODS', 'SCOPE_ADAPTORS', 'SCOPE_ALL', 'SCOPES', 'FinetuneConfig', 'finetune', 'PractiseConfig',
    'PractiseReport', 'practise_compress', 'recoverability_consistency', 'score_blocks',
]
