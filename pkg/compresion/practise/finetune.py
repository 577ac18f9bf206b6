# compresion/practise/finetune.py
import logging
from dataclasses import dataclass, field

from scipy.special import softmax

from .. import autodiff as ad
from ..compress.adaptors import ALL, AdaptorSet, fuse_adaptors, insert_adaptors
from ..errors import ConfigError, DimensionError
from ..network.model import forward, forward_graph
from .scoring import MIMIC_MAX_GRAD_NORM, mimic_beta, train_adaptors

logger = logging.getLogger(__name__)

BP = 'bp'
KD = 'kd'
FEATURE_MIMIC = 'feature_mimic'
METHODS = (BP, KD, FEATURE_MIMIC)

SCOPE_ALL = 'all'
SCOPE_ADAPTORS = 'adaptors'
SCOPES = (SCOPE_ALL, SCOPE_ADAPTORS)


@dataclass(frozen=True)
class FinetuneConfig:
    """
    bp: entropía cruzada con etiquetas; kd: objetivos blandos del profesor con
    temperatura; feature_mimic: MSE de features (escalado por mimic_beta, con
    recorte de gradiente) y la cabeza del profesor copiada y congelada.
    scope='adaptors' entrena solo adaptadores y los fusiona.
    """
    method: str = FEATURE_MIMIC
    iters: int = 2000
    batch: int = 64
    lr: ad.LrSchedule = field(default_factory=lambda: ad.LrSchedule(0.02, 2000))
    temperature: float = 4.0
    scope: str = SCOPE_ALL
    radius: object = ALL

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError(f"Método de ajuste desconocido: {self.method!r}; opciones: {METHODS}")
        if self.scope not in SCOPES:
            raise ConfigError(f"Alcance de ajuste desconocido: {self.scope!r}; opciones: {SCOPES}")
        if self.scope == SCOPE_ADAPTORS and self.method != FEATURE_MIMIC:
            raise ConfigError("scope='adaptors' solo es compatible con feature_mimic")
        if self.iters < 0 or self.batch < 1:
            raise ConfigError("iters >= 0 y batch >= 1")
        if self.temperature <= 0:
            raise ConfigError(f"La temperatura debe ser positiva, recibido {self.temperature}")

    @property
    def uses_labels(self):
        return self.method == BP


def _check_pruned_from(teacher, student):
    if student.spec != teacher.spec or not teacher.dropped <= student.dropped:
        raise DimensionError("El alumno debe ser una versión podada del profesor")


def _trainable(student, method):
    names = student.param_names()
    if method == FEATURE_MIMIC:
        frozen = set(student.head_param_names())
        names = [name for name in names if name not in frozen]
    return names


def _loss(method, student, tiny_set, teacher, temperature):
    X = tiny_set.X
    if method == BP:
        labels = tiny_set.require_labels()

        def loss_fn(leaves, idx):
            _, logits = forward_graph(student, X[idx], params=leaves)
            return ad.softmax_ce(logits, labels[idx])
    elif method == KD:
        _, teacher_logits = forward(teacher, X)
        targets = softmax(teacher_logits / temperature, axis=1)

        def loss_fn(leaves, idx):
            _, logits = forward_graph(student, X[idx], params=leaves)
            return ad.softmax_ce(logits, targets[idx], temperature)
    else:
        target, _ = forward(teacher, X)
        beta = mimic_beta(target)

        def loss_fn(leaves, idx):
            feature, _ = forward_graph(student, X[idx], params=leaves)
            return ad.feature_mse(feature, target[idx], beta)
    return loss_fn


def _finetune_adaptors(teacher, student, tiny_set, cfg, seed):
    adaptors = AdaptorSet()
    for block in sorted(student.dropped - teacher.dropped):
        adaptors = adaptors.merge(insert_adaptors(student, block, cfg.radius)[1])
    if not len(adaptors):
        return student, []
    target, _ = forward(teacher, tiny_set.X)
    trained, trace = train_adaptors(
        student, adaptors, tiny_set.X, target, cfg.iters, cfg.lr, cfg.batch, seed,
        label='finetune adaptors',
    )
    return fuse_adaptors(student, trained), trace


def finetune(teacher, student, tiny_set, cfg, seed=0):
    """
    Ajusta el alumno podado sobre el conjunto pequeño. Devuelve
    (alumno, traza de pérdidas). Con feature_mimic las etiquetas no se leen.
    """
    _check_pruned_from(teacher, student)
    student = student.clone()
    if cfg.method == FEATURE_MIMIC:
        for name in student.head_param_names():
            student.params[name] = teacher.params[name].copy()
    if cfg.scope == SCOPE_ADAPTORS:
        return _finetune_adaptors(teacher, student, tiny_set, cfg, seed)

    params, trace = ad.minimize_sgd(
        student.params, _trainable(student, cfg.method),
        _loss(cfg.method, student, tiny_set, teacher, cfg.temperature),
        n_samples=len(tiny_set), iters=cfg.iters, schedule=cfg.lr.with_total(cfg.iters),
        batch=cfg.batch, seed=seed, label=f'finetune {cfg.method}',
        max_grad_norm=MIMIC_MAX_GRAD_NORM if cfg.method == FEATURE_MIMIC else None,
    )
    return student.with_params(params), trace
