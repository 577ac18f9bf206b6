# compresion/landscape/diagnostics.py
from typing import NamedTuple

import numpy as np


class Leakage(NamedTuple):
    raw: float
    clamped: float


def _interior_excess(curve):
    # loss − cuerda en los λ interiores; en los extremos vale 0 por construcción
    excess = curve.losses - curve.chord()
    return excess[1:-1] if excess.size > 2 else np.zeros(1)


def convexity_gap(curve):
    """
    max_λ [loss(λ) − cuerda(λ)] sobre los λ interiores. Un valor ≤ 0
    certifica convexidad empírica a lo largo del segmento.
    """
    return float(np.max(_interior_excess(curve)))


def loss_leakage(curve):
    """
    Cuánto baja la curva entre dos modelos afinados por debajo de su cuerda:
    max_λ [cuerda(λ) − loss(λ)], y el mismo valor recortado a ≥ 0.
    """
    raw = float(np.max(-_interior_excess(curve)))
    return Leakage(raw, max(raw, 0.0))


def summarize(curve):
    leakage = loss_leakage(curve)
    return {
        'loss_start': float(curve.losses[0]),
        'loss_end': float(curve.losses[-1]),
        'loss_mid': curve.midpoint_loss(),
        'convexity_gap': convexity_gap(curve),
        'leakage_raw': leakage.raw,
        'leakage': leakage.clamped,
    }
