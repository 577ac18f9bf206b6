# compresion/landscape/interpolation.py
from dataclasses import dataclass, field

import numpy as np

from .. import autodiff as ad
from ..errors import DatasetError, DimensionError
from ..network.model import forward
from ..network.params import ParamVector, same_layout, unflatten

CROSS_ENTROPY = 'cross_entropy'
FEATURE_MSE = 'feature_mse'
LOSS_KINDS = (CROSS_ENTROPY, FEATURE_MSE)
DEFAULT_POINTS = 21


def default_lambdas(points=DEFAULT_POINTS):
    return np.linspace(0.0, 1.0, points)


def interpolate(theta_a, theta_b, lam):
    """
    λ·θ_b + (1−λ)·θ_a, calculado como θ_a + λ·(θ_b − θ_a) para que θ_a = θ_b
    dé el mismo vector en todo λ. λ=0 y λ=1 devuelven los extremos exactos.
    """
    if not same_layout(theta_a, theta_b):
        raise DimensionError("interpolate: los vectores de parámetros tienen layouts distintos")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"interpolate: λ debe estar en [0, 1], recibido {lam}")
    if lam == 1.0:
        return ParamVector(theta_b.values, theta_b.layout)
    return ParamVector(theta_a.values + lam * (theta_b.values - theta_a.values), theta_a.layout)


@dataclass(frozen=True)
class InterpolationCurve:
    lambdas: np.ndarray
    losses: np.ndarray
    endpoints_meta: dict = field(default_factory=dict)

    def __post_init__(self):
        lambdas = np.array(self.lambdas, dtype=np.float64)
        losses = np.array(self.losses, dtype=np.float64)
        if lambdas.ndim != 1 or lambdas.shape != losses.shape or lambdas.size < 2:
            raise DimensionError("La curva necesita al menos dos λ y una pérdida por λ")
        if lambdas[0] != 0.0 or lambdas[-1] != 1.0 or np.any(np.diff(lambdas) <= 0):
            raise ValueError("La rejilla de λ debe ser estrictamente creciente y cubrir [0, 1]")
        for array in (lambdas, losses):
            array.setflags(write=False)
        object.__setattr__(self, 'lambdas', lambdas)
        object.__setattr__(self, 'losses', losses)

    def chord(self):
        return self.lambdas * self.losses[-1] + (1.0 - self.lambdas) * self.losses[0]

    def midpoint_loss(self):
        return float(self.losses[np.argmin(np.abs(self.lambdas - 0.5))])


def _loss_fn(loss_kind, dataset, teacher):
    if loss_kind == CROSS_ENTROPY:
        labels = dataset.require_labels()
        return lambda model: ad.softmax_ce(forward(model, dataset.X)[1], labels).item()
    if loss_kind == FEATURE_MSE:
        if teacher is None:
            raise ValueError("feature_mse necesita el modelo profesor")
        target, _ = forward(teacher, dataset.X)
        return lambda model: ad.feature_mse(forward(model, dataset.X)[0], target).item()
    raise ValueError(f"Tipo de pérdida desconocido: {loss_kind!r}; opciones: {LOSS_KINDS}")


def loss_curve(spec, dropped, theta_a, theta_b, dataset, loss_kind, lambdas=None, teacher=None,
               endpoints_meta=None):
    """
    Evalúa la pérdida sobre todo `dataset` en cada punto del segmento θ_a → θ_b.
    Los extremos usan exactamente θ_a y θ_b con el mismo orden de evaluación.
    """
    if len(dataset) == 0:
        raise DatasetError("loss_curve: dataset vacío")
    lambdas = default_lambdas() if lambdas is None else np.asarray(lambdas, dtype=np.float64)
    evaluate = _loss_fn(loss_kind, dataset, teacher)

    losses = []
    for lam in lambdas:
        point = interpolate(theta_a, theta_b, float(lam))
        losses.append(evaluate(unflatten(point.layout, point.values, spec, dropped)))
    meta = {'loss_kind': loss_kind, 'n_eval': len(dataset)}
    meta.update(endpoints_meta or {})
    return InterpolationCurve(lambdas, losses, meta)
