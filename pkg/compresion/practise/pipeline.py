# compresion/practise/pipeline.py
"""
Selección de bloques a eliminar con pocos datos: para cada bloque se mide la
aceleración τ al quitarlo y la recuperabilidad R (distancia de features tras
entrenar solo adaptadores), se puntúa s = R/τ y se eliminan juntos los k
bloques de menor score. Luego se ajusta el modelo podado por imitación de
features.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from .. import autodiff as ad
from ..compress.adaptors import ALL
from ..compress.pruning import drop_block, drop_blocks
from ..errors import CompresionError, ConfigError
from ..network.model import forward
from ..network.training import evaluate_classifier
from .finetune import FEATURE_MIMIC, FinetuneConfig, finetune
from .latency import latency_ratio, measure_latency
from .scoring import BlockScore, block_seed, fit_adaptors, pruning_score, rank_blocks

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PractiseConfig:
    radius: object = ALL
    adaptor_iters: int = 1000
    adaptor_lr: ad.LrSchedule = field(default_factory=lambda: ad.LrSchedule(0.02, 1000))
    adaptor_batch: int = 64
    latency_trials: int = 500
    latency_warmup: int = 10
    latency_batch: int = 64
    finetune: FinetuneConfig = field(default_factory=FinetuneConfig)
    greedy: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.finetune.method != FEATURE_MIMIC:
            raise ConfigError("La compresión por scores de bloque ajusta siempre por imitación de features (feature_mimic)")


@dataclass
class PractiseReport:
    scores: list
    chosen: list
    finetune_trace: list
    latency_original: object
    teacher_checksum: str
    greedy: bool = False
    rounds: list = field(default_factory=list)

    def to_dict(self):
        """Separa los campos deterministas de los que dependen del tiempo medido."""
        return {
            'chosen': [str(b) for b in self.chosen],
            'greedy': self.greedy,
            'deterministic': {
                'recoverability': {str(s.block): s.recoverability for s in self.scores},
                'finetune_trace': list(self.finetune_trace),
                'teacher_checksum': self.teacher_checksum,
            },
            'timing': {
                'latency_original': self.latency_original.to_dict(),
                'blocks': [
                    {**s.to_row(), 'latency': s.latency.to_dict() if s.latency else None}
                    for s in self.scores
                ],
                'rounds': [[str(b) for b in r] for r in self.rounds],
            },
        }


def score_blocks(base, teacher_features, tiny_set, cfg, base_latency=None):
    """
    Puntúa cada bloque presente en `base` por separado, siempre contra el
    mismo `base` intacto. Devuelve (lista de BlockScore, latencia de `base`).
    """
    shape = (cfg.latency_batch, base.spec.input_dim)
    if base_latency is None:
        base_latency = measure_latency(base, shape, cfg.latency_trials, cfg.latency_warmup, cfg.seed)

    scores = []
    for block in base.active_blocks():
        pruned = drop_block(base, block)
        latency = measure_latency(pruned, shape, cfg.latency_trials, cfg.latency_warmup, cfg.seed)
        tau = latency_ratio(base_latency, latency)
        recovery = fit_adaptors(
            base, block, tiny_set, cfg.radius, cfg.adaptor_iters, cfg.adaptor_lr,
            cfg.adaptor_batch, block_seed(cfg.seed, block), teacher_features,
        )
        R = recovery.recoverability
        score = BlockScore(block, R, tau, pruning_score(R, tau), latency)
        logger.info("%s: R=%.6g τ=%.4f s=%.6g", block, R, tau, score.score)
        scores.append(score)
    return scores, base_latency


def practise_compress(teacher, k, tiny_set, cfg):
    """
    Devuelve (modelo podado y ajustado, PractiseReport). Con k=0 el modelo es
    una copia del profesor y el reporte lleva igualmente todos los scores.
    """
    droppable = teacher.active_blocks()
    if not 0 <= k <= len(droppable):
        raise ConfigError(f"k={k} fuera de rango: hay {len(droppable)} bloques eliminables")

    checksum = teacher.checksum()
    teacher_features, _ = forward(teacher, tiny_set.X)
    scores, base_latency = score_blocks(teacher, teacher_features, tiny_set, cfg)
    ranked = rank_blocks(scores)

    rounds = []
    if cfg.greedy:
        chosen = []
        current = teacher
        candidates = ranked
        for _ in range(k):
            rounds.append([s.block for s in candidates])
            pick = candidates[0].block
            chosen.append(pick)
            current = drop_block(current, pick)
            if len(chosen) < k:
                candidates, _ = score_blocks(current, teacher_features, tiny_set, cfg)
                candidates = rank_blocks(candidates)
    else:
        chosen = [s.block for s in ranked[:k]]

    if teacher.checksum() != checksum:
        raise CompresionError("El profesor cambió durante el cálculo de scores")

    pruned = drop_blocks(teacher, sorted(chosen)) if chosen else teacher.clone()
    trace = []
    if k > 0:
        pruned, trace = finetune(teacher, pruned, tiny_set, cfg.finetune, seed=cfg.seed)
    report = PractiseReport(scores, chosen, trace, base_latency, checksum, cfg.greedy, rounds)
    return pruned, report


def _rank_correlation(a, b):
    rho = spearmanr(a, b).statistic
    return None if np.isnan(rho) else float(rho)


def recoverability_consistency(teacher, scores, tiny_set, evaluation, finetune_cfg, seed=0):
    """
    Verificación por fuerza bruta del criterio: cada bloque se elimina solo,
    se ajusta el modelo y se evalúa. Devuelve la correlación de Spearman de R
    y de s con el error y la pérdida de validación tras el ajuste (positiva
    si el orden coincide).
    """
    rows = []
    for score in scores:
        pruned = drop_block(teacher, score.block)
        tuned, _ = finetune(teacher, pruned, tiny_set, finetune_cfg, seed=seed)
        metrics = evaluate_classifier(tuned, evaluation)
        rows.append({
            'block': str(score.block),
            'recoverability': score.recoverability,
            'score': score.score,
            'error': 1.0 - metrics['accuracy'],
            'loss': metrics['loss'],
        })
        logger.info("%s ajustado: error=%.4f loss=%.6g", score.block, rows[-1]['error'], metrics['loss'])

    if len(rows) < 2:
        return {'rows': rows, 'spearman': {}}
    columns = {key: [row[key] for row in rows] for key in ('recoverability', 'score', 'error', 'loss')}
    return {
        'rows': rows,
        'spearman': {
            f'{x}_vs_{y}': _rank_correlation(columns[x], columns[y])
            for x in ('recoverability', 'score') for y in ('error', 'loss')
        },
    }
