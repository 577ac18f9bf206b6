from .interpolation import (
    CROSS_ENTROPY, DEFAULT_POINTS, FEATURE_MSE, LOSS_KINDS, InterpolationCurve,
    default_lambdas, interpolate, loss_curve,
)
from .diagnostics import Leakage, convexity_gap, loss_leakage, summarize
from .export import diagnostics_table, read_curve, write_curve

__all__ = [
    'CROSS_ENTROPY', 'DEFAULT_POINTS', 'FEATURE_MSE', 'LOSS_KINDS', 'InterpolationCurve',
    'default_lambdas', 'interpolate', 'loss_curve', 'Leakage', 'convexity_gap',
    'loss_leakage', 'summarize', 'diagnostics_table', 'read_curve', 'write_curve',
]
