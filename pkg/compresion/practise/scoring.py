# compresion/practise/scoring.py
import logging
from dataclasses import dataclass

import numpy as np

from .. import autodiff as ad
from ..compress.adaptors import ALL, fuse_adaptors, insert_adaptors, param_name
from ..compress.pruning import drop_block
from ..errors import DatasetError
from ..network.model import forward, forward_graph
from ..network.spec import BlockId
from .latency import LatencyStats

logger = logging.getLogger(__name__)

# Recorte de gradiente en todo ajuste por imitación de features
MIMIC_MAX_GRAD_NORM = 5.0


def mimic_beta(target):
    """
    β del objetivo de imitación: lleva la energía media por dimensión de las
    features del profesor a 1. La distancia reportada (R) sigue usando β=1.
    """
    scale = float(np.mean(np.square(target))) if np.size(target) else 0.0
    return 1.0 / scale if scale > 0 else 1.0


@dataclass(frozen=True)
class BlockScore:
    block: BlockId
    recoverability: float
    tau: float
    score: float
    latency: LatencyStats = None

    def __post_init__(self):
        if self.recoverability < 0:
            raise ValueError(f"{self.block}: recoverability negativa {self.recoverability}")
        if not 0 < self.tau < 1:
            raise ValueError(f"{self.block}: τ fuera de (0, 1): {self.tau}")
        if self.score != self.recoverability / self.tau:
            raise ValueError(f"{self.block}: score distinto de R/τ")

    def sort_key(self):
        return self.score, self.block

    def to_row(self):
        row = {
            'block': str(self.block),
            'stage': self.block.stage,
            'index': self.block.index,
            'recoverability': self.recoverability,
            'tau': self.tau,
            'score': self.score,
        }
        if self.latency is not None:
            row['latency_mean_ms'] = self.latency.mean_ms
            row['latency_std_ms'] = self.latency.std_ms
            row['latency_trials'] = self.latency.trials
        return row


def pruning_score(recoverability, tau):
    """s = R/τ; menor score, mayor prioridad para eliminar el bloque."""
    if tau <= 0:
        raise ValueError(f"τ debe ser positivo, recibido {tau}")
    return recoverability / tau


def feature_distance(model, X, target, adaptors=None):
    """Distancia cuadrática media de features (β=1) sobre todas las filas."""
    feature, _ = forward(model, X, adaptors=adaptors)
    return ad.feature_mse(feature, target).item()


def train_adaptors(student, adaptors, X, target, iters, schedule, batch, seed, label='adaptors'):
    """
    Ajusta solo las matrices de `adaptors` para que las features del alumno
    imiten `target`. Los parámetros del alumno no se tocan. La traza está en
    unidades del objetivo escalado por mimic_beta.
    """
    names = {param_name(key): key for key in adaptors}
    params = {name: adaptors[key] for name, key in names.items()}
    beta = mimic_beta(target)

    def loss_fn(leaves, idx):
        attached = {key: leaves[name] for name, key in names.items()}
        feature, _ = forward_graph(student, X[idx], adaptors=attached)
        return ad.feature_mse(feature, target[idx], beta)

    trained, trace = ad.minimize_sgd(
        params, names, loss_fn, n_samples=X.shape[0], iters=iters,
        schedule=schedule.with_total(iters), batch=batch, seed=seed, label=label,
        max_grad_norm=MIMIC_MAX_GRAD_NORM,
    )
    return adaptors.with_matrices({key: trained[name] for name, key in names.items()}), trace


@dataclass(frozen=True)
class Recovery:
    recoverability: float
    pruned: object
    adaptors: object
    trace: list

    def fused(self):
        return fuse_adaptors(self.pruned, self.adaptors)


def fit_adaptors(teacher, block, tiny_set, radius=ALL, adaptor_iters=1000, lr=None, batch=64,
                 seed=0, teacher_features=None):
    """
    Elimina `block`, inserta adaptadores identidad y los entrena imitando las
    features del profesor. R es la mejor distancia vista entre la identidad y
    los adaptadores entrenados.
    """
    if len(tiny_set) == 0:
        raise DatasetError("recoverability: el conjunto pequeño está vacío")
    lr = lr or ad.LrSchedule(0.02, max(1, adaptor_iters))
    pruned = drop_block(teacher, block)
    _, identity = insert_adaptors(pruned, block, radius)
    X = tiny_set.X
    target = teacher_features if teacher_features is not None else forward(teacher, X)[0]

    adaptors, trace = train_adaptors(
        pruned, identity, X, target, adaptor_iters, lr, batch, seed, label=f'adaptors {block}',
    )
    trained = feature_distance(pruned, X, target, adaptors)
    initial = feature_distance(pruned, X, target, identity)
    if initial < trained:
        adaptors, trained = identity, initial
    return Recovery(max(trained, 0.0), pruned, adaptors, trace)


def recoverability(teacher, block, tiny_set, radius=ALL, adaptor_iters=1000, lr=None, batch=64,
                   seed=0, teacher_features=None):
    return fit_adaptors(
        teacher, block, tiny_set, radius, adaptor_iters, lr, batch, seed, teacher_features,
    ).recoverability


def rank_blocks(scores):
    """Orden de eliminación: score ascendente, empates por el BlockId menor."""
    return sorted(scores, key=BlockScore.sort_key)


def block_seed(seed, block):
    # Semilla por bloque: el resultado no depende del orden de enumeración
    return np.random.SeedSequence([seed, block.stage, block.index]).generate_state(1)[0]
