# compresion/practise/latency.py
import logging
import time
from dataclasses import asdict, dataclass

import numpy as np

from .. import autodiff as ad
from ..network.model import forward_graph

logger = logging.getLogger(__name__)

MIN_REPORTED_TRIALS = 30
TAU_FLOOR = 1e-6


@dataclass(frozen=True)
class LatencyStats:
    """Tiempos de forward en ms; la desviación solo cuenta las pruebas tras el calentamiento."""
    mean_ms: float
    std_ms: float
    trials: int
    warmup: int
    input_shape: tuple

    @property
    def reportable(self):
        return self.trials >= MIN_REPORTED_TRIALS

    def to_dict(self):
        data = asdict(self)
        data['input_shape'] = list(self.input_shape)
        return data


def measure_latency(model, input_shape=None, trials=500, warmup=10, seed=0):
    """
    Cronometra `trials` forwards sin grafo sobre una entrada aleatoria fija.
    Los hilos BLAS se fijan en manage.py; aquí no se lanza nada en paralelo.
    """
    if trials < 1:
        raise ValueError(f"trials debe ser >= 1, recibido {trials}")
    input_shape = tuple(input_shape or (64, model.spec.input_dim))
    x = ad.Tensor(np.random.default_rng(seed).standard_normal(input_shape))

    times = np.empty(trials)
    with ad.no_grad():
        for _ in range(warmup):
            forward_graph(model, x)
        for trial in range(trials):
            start = time.perf_counter()
            forward_graph(model, x)
            times[trial] = (time.perf_counter() - start) * 1e3

    stats = LatencyStats(float(times.mean()), float(times.std()), trials, warmup, input_shape)
    if not stats.reportable:
        logger.debug("Latencia con solo %d pruebas; no apta para reportar", trials)
    return stats


def latency_ratio(lat_orig, lat_pruned, clamp=True):
    """
    τ = (lat_O − lat_P) / lat_O. Si la versión podada no es más rápida se
    avisa y, con clamp, τ se recorta a TAU_FLOOR.
    """
    original = getattr(lat_orig, 'mean_ms', lat_orig)
    pruned = getattr(lat_pruned, 'mean_ms', lat_pruned)
    if original <= 0 or pruned <= 0:
        raise ValueError("Las latencias medias deben ser positivas")
    tau = (original - pruned) / original
    if tau <= 0:
        logger.warning(
            "La versión podada no es más rápida (%.4f ms vs %.4f ms); τ=%.3g", pruned, original, tau
        )
        if clamp:
            return TAU_FLOOR
    return tau
