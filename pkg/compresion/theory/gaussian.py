# compresion/theory/gaussian.py
import numpy as np
from scipy.stats import norm

from .reports import ClaimReport


def gaussian_nll_residual(f, mu, beta):
    """−ln N(f; μ, 1/(2β)) − β(f−μ)²; debe ser constante en (f, μ)."""
    scale = 1.0 / np.sqrt(2.0 * beta)
    return -norm.logpdf(f, loc=mu, scale=scale) - beta * (np.asarray(f) - mu) ** 2


def gaussian_constant(beta):
    # ½·ln(2πσ²) con σ² = 1/(2β)
    return 0.5 * np.log(np.pi / beta)


def verify_gaussian_mse(beta=0.5, trials=1000, seed=0):
    """La NLL gaussiana con σ = 1/sqrt(2β) es la pérdida L2 con peso β más una constante."""
    if beta <= 0:
        raise ValueError(f"beta debe ser positivo, recibido {beta}")
    rng = np.random.default_rng(seed)
    f = rng.standard_normal(trials)
    mu = rng.standard_normal(trials)
    residual = gaussian_nll_residual(f, mu, beta)
    deviation = float(np.max(np.abs(residual - residual.mean())))
    return ClaimReport(
        claim='gaussian_mse', passed=deviation < 1e-12, trials=trials,
        predicted=float(gaussian_constant(beta)), empirical=float(residual.mean()),
        details={'beta': beta, 'max_deviation': deviation},
    )
