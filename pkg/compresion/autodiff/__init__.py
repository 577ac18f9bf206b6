from .tensor import Tensor, backward, no_grad, is_grad_enabled
from .ops import (
    as_tensor, matmul, add, mul, scale, relu,
    sum_all, linear, feature_mse, softmax_ce,
)
from .optim import LrSchedule, sgd_step, clip_by_global_norm, minimize_sgd, batch_indices

__all__ = [
    'Tensor', 'backward', 'no_grad', 'is_grad_enabled',
    'as_tensor', 'matmul', 'add', 'mul', 'scale', 'relu',
    'sum_all', 'linear', 'feature_mse', 'softmax_ce',
    'LrSchedule', 'sgd_step', 'clip_by_global_norm', 'minimize_sgd', 'batch_indices',
]
