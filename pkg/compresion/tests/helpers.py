# compresion/tests/helpers.py
from functools import cache

import numpy as np

from ..data import generate_gaussian_mixture
from ..experiments import build_dataset, build_spec, derive_seed, load_config, schedule
from ..network import ResNetSpec, build, train_teacher

BENCHMARK_SEEDS = range(5)


def numeric_gradient(fn, x, h=1e-6):
    """Diferencias centrales de una función escalar respecto a cada entrada de x."""
    x = np.array(x, dtype=np.float64)
    grad = np.zeros_like(x)
    for index in np.ndindex(x.shape):
        plus, minus = x.copy(), x.copy()
        plus[index] += h
        minus[index] -= h
        grad[index] = (fn(plus) - fn(minus)) / (2 * h)
    return grad


def random_model(seed=0, input_dim=4, stages=((8, 2), (6, 2)), num_classes=3, bias_scale=0.1):
    """Modelo con sesgos no nulos para que los tests no dependan de la inicialización en cero."""
    model = build(ResNetSpec(input_dim, stages, num_classes, seed=seed))
    rng = np.random.default_rng(seed + 1000)
    for name, value in model.params.items():
        if name.endswith('.b'):
            model.params[name] = bias_scale * rng.standard_normal(value.shape)
    return model


def toy_dataset(seed=0, K=3, d=4, n_per_class=40, class_sep=3.0, heldout_per_class=20):
    return generate_gaussian_mixture(K, d, n_per_class, class_sep, seed, heldout_per_class)


@cache
def benchmark(seed):
    """
    (config, dataset, profesor) de la configuración por defecto con la semilla
    dada, igual que train_teacher. Compartido entre tests lentos; no mutar.
    """
    config = load_config(seed=seed)
    dataset = build_dataset(config)
    section = config['teacher']
    teacher, _ = train_teacher(
        build(build_spec(config, dataset)), dataset, section['iters'],
        schedule(section['lr'], section['iters']), section['batch'], derive_seed(seed, 'teacher'),
    )
    return config, dataset, teacher
