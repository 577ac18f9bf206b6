# compresion/autodiff/optim.py
import logging
import math
from dataclasses import dataclass

import numpy as np

from ..errors import DimensionError, NumericalError
from .tensor import Tensor, backward

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LrSchedule:
    """
    Tasa de aprendizaje escalonada: se divide por `decay_factor` cada
    `decay_every_frac` del total de iteraciones (0.02 y ÷10 cada 40% por defecto).
    """
    base_lr: float = 0.02
    total_iters: int = 1000
    decay_factor: float = 10.0
    decay_every_frac: float = 0.4

    def __post_init__(self):
        if self.total_iters < 1:
            raise ValueError(f"total_iters debe ser positivo, recibido {self.total_iters}")
        if self.base_lr < 0:
            raise ValueError(f"base_lr no puede ser negativo, recibido {self.base_lr}")
        if self.decay_factor < 1 or self.decay_every_frac <= 0:
            raise ValueError("decay_factor >= 1 y decay_every_frac > 0")

    def lr(self, iteration):
        period = self.decay_every_frac * self.total_iters
        steps = math.floor(iteration / period)
        return self.base_lr / self.decay_factor ** steps

    def with_total(self, total_iters):
        return LrSchedule(self.base_lr, max(1, total_iters), self.decay_factor, self.decay_every_frac)


def sgd_step(params, grads, lr):
    """
    θ ← θ − lr·g para cada parámetro. Devuelve un diccionario nuevo; los
    parámetros sin gradiente en `grads` se copian sin cambios.
    """
    if lr < 0:
        raise ValueError(f"lr no puede ser negativo, recibido {lr}")
    unknown = set(grads) - set(params)
    if unknown:
        raise DimensionError(f"sgd_step: gradientes sin parámetro: {sorted(unknown)}")

    updated = {}
    for name, value in params.items():
        g = grads.get(name)
        if g is None:
            updated[name] = np.array(value)
            continue
        if np.shape(g) != np.shape(value):
            raise DimensionError(
                f"sgd_step: {name} tiene forma {np.shape(value)} y gradiente {np.shape(g)}"
            )
        updated[name] = value - lr * g
    return updated


def clip_by_global_norm(grads, max_norm):
    """Reescala todos los gradientes si su norma conjunta supera `max_norm`."""
    if max_norm is None:
        return grads
    if max_norm <= 0:
        raise ValueError(f"max_norm debe ser positivo, recibido {max_norm}")
    norm = math.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
    if norm <= max_norm:
        return grads
    factor = max_norm / norm
    return {name: g * factor for name, g in grads.items()}


def batch_indices(rng, n_samples, batch):
    # Si el batch cubre el conjunto completo se usa entero, en orden
    if batch >= n_samples:
        return np.arange(n_samples)
    return np.sort(rng.choice(n_samples, size=batch, replace=False))


def minimize_sgd(params, trainable, loss_fn, n_samples, iters, schedule, batch, seed, label='sgd',
                 max_grad_norm=None):
    """
    Bucle de SGD plano (sin momentum ni weight decay).

    params:        {nombre: ndarray}
    trainable:     nombres que se actualizan; el resto queda congelado
    loss_fn:       loss_fn(hojas: {nombre: Tensor}, idx: ndarray) -> Tensor escalar
    max_grad_norm: si se indica, recorte por norma global antes de cada paso

    Devuelve (params_finales, traza_de_pérdidas). Determinista para un `seed`.
    """
    if n_samples < 1:
        raise ValueError("minimize_sgd: no hay muestras")
    trainable = frozenset(trainable)
    missing = trainable - set(params)
    if missing:
        raise DimensionError(f"minimize_sgd: parámetros entrenables inexistentes: {sorted(missing)}")

    rng = np.random.default_rng(seed)
    batch = max(1, min(batch, n_samples))
    params = {name: np.asarray(value, dtype=np.float64) for name, value in params.items()}
    trace = []
    report_every = max(1, iters // 10)

    for it in range(iters):
        idx = batch_indices(rng, n_samples, batch)
        leaves = {
            name: Tensor(value, requires_grad=name in trainable)
            for name, value in params.items()
        }
        loss = loss_fn(leaves, idx)
        value = loss.item()
        if not math.isfinite(value):
            raise NumericalError(f"{label}: pérdida no finita en la iteración {it}")
        grads = backward(loss)
        named = {
            name: grads.get(leaves[name], np.zeros_like(params[name]))
            for name in trainable
        }
        params = sgd_step(params, clip_by_global_norm(named, max_grad_norm), schedule.lr(it))
        trace.append(value)
        if (it + 1) % report_every == 0:
            logger.debug("%s: iteración %d/%d, pérdida %.6g", label, it + 1, iters, value)

    if trace:
        logger.info("%s: %d iteraciones, pérdida final %.6g", label, iters, trace[-1])
    return params, trace
