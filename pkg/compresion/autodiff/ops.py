# compresion/autodiff/ops.py
"""
Operaciones diferenciables sobre Tensor. Todas devuelven Tensores nuevos;
las entradas nunca se modifican.
"""
import numpy as np
from scipy.special import log_softmax, softmax

from ..errors import DimensionError, NumericalError
from .tensor import Tensor, make_result


def as_tensor(value):
    return value if isinstance(value, Tensor) else Tensor(value)


def _unbroadcast(grad, shape):
    """Suma el gradiente sobre los ejes que se expandieron por broadcasting."""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


def _check_broadcast(a, b, name):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError:
        raise DimensionError(f"{name}: formas incompatibles {a.shape} y {b.shape}") from None


def matmul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"matmul: formas incompatibles {a.shape} y {b.shape}")

    def _backward(g):
        return g @ b.data.T, a.data.T @ g

    return make_result(a.data @ b.data, (a, b), _backward, 'matmul')


def add(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, 'add')

    def _backward(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return make_result(a.data + b.data, (a, b), _backward, 'add')


def mul(a, b):
    a, b = as_tensor(a), as_tensor(b)
    _check_broadcast(a, b, 'mul')

    def _backward(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return make_result(a.data * b.data, (a, b), _backward, 'mul')


def scale(a, factor):
    a = as_tensor(a)
    factor = float(factor)
    return make_result(a.data * factor, (a,), lambda g: (g * factor,), 'scale')


def relu(x):
    # Subgradiente en 0 definido como 0
    x = as_tensor(x)
    mask = x.data > 0

    def _backward(g):
        return (g * mask,)

    return make_result(np.where(mask, x.data, 0.0), (x,), _backward, 'relu')


def sum_all(x):
    x = as_tensor(x)
    return make_result(x.data.sum(), (x,), lambda g: (np.full(x.shape, g),), 'sum')


def linear(x, weight, bias=None):
    """
    Capa lineal y = x·Wᵀ + b con W de forma (out, in), fusionada en un solo
    nodo del grafo.
    """
    x, weight = as_tensor(x), as_tensor(weight)
    if x.ndim != 2 or weight.ndim != 2 or x.shape[1] != weight.shape[1]:
        raise DimensionError(f"linear: entrada {x.shape} incompatible con pesos {weight.shape}")
    out = x.data @ weight.data.T
    if bias is None:
        def _backward(g):
            return g @ weight.data, g.T @ x.data

        return make_result(out, (x, weight), _backward, 'linear')

    bias = as_tensor(bias)
    if bias.shape != (weight.shape[0],):
        raise DimensionError(f"linear: sesgo {bias.shape} incompatible con pesos {weight.shape}")

    def _backward(g):
        return g @ weight.data, g.T @ x.data, g.sum(axis=0)

    return make_result(out + bias.data, (x, weight, bias), _backward, 'linear')


def feature_mse(f_student, f_teacher, beta=1.0):
    """
    beta × promedio sobre el batch de ||f_s − f_t||² (Frobenius por muestra).
    Con beta=1 y el profesor fijo es la pérdida de feature mimicking.
    """
    f_student, f_teacher = as_tensor(f_student), as_tensor(f_teacher)
    if f_student.shape != f_teacher.shape:
        raise DimensionError(
            f"feature_mse: formas distintas {f_student.shape} y {f_teacher.shape}"
        )
    if beta <= 0:
        raise ValueError(f"feature_mse: beta debe ser positivo, recibido {beta}")
    batch = f_student.shape[0] if f_student.ndim > 0 else 1
    diff = f_student.data - f_teacher.data
    value = beta * float(np.sum(diff * diff)) / batch

    def _backward(g):
        grad = g * (2.0 * beta / batch) * diff
        return grad, -grad

    return make_result(value, (f_student, f_teacher), _backward, 'feature_mse')


def softmax_ce(logits, targets, temperature=1.0):
    """
    Entropía cruzada media de softmax(logits / T) contra etiquetas duras
    (vector de enteros) o filas de probabilidades del profesor.
    T=1 es la entropía cruzada usual (BP); objetivos blandos con T>1 es KD.
    """
    logits = as_tensor(logits)
    if temperature <= 0:
        raise ValueError(f"softmax_ce: la temperatura debe ser positiva, recibido {temperature}")
    if logits.ndim != 2:
        raise DimensionError(f"softmax_ce: se esperaban logits 2D, forma {logits.shape}")
    if not np.all(np.isfinite(logits.data)):
        raise NumericalError("softmax_ce: logits no finitos")

    batch, classes = logits.shape
    targets = np.asarray(targets)
    if targets.ndim == 1:
        if targets.shape[0] != batch:
            raise DimensionError(f"softmax_ce: {targets.shape[0]} etiquetas para {batch} filas")
        labels = targets.astype(np.int64)
        if labels.min(initial=0) < 0 or labels.max(initial=0) >= classes:
            raise DimensionError(f"softmax_ce: etiquetas fuera de [0, {classes})")
        probs = np.zeros((batch, classes))
        probs[np.arange(batch), labels] = 1.0
    else:
        probs = targets.astype(np.float64)
        if probs.shape != logits.shape:
            raise DimensionError(f"softmax_ce: objetivos {probs.shape} y logits {logits.shape}")
        if np.any(np.abs(probs.sum(axis=1) - 1.0) > 1e-9):
            raise ValueError("softmax_ce: las filas de probabilidades deben sumar 1")

    z = logits.data / temperature
    log_q = log_softmax(z, axis=1)
    value = -float(np.sum(probs * log_q)) / batch

    def _backward(g):
        return (g * (softmax(z, axis=1) - probs) / (temperature * batch),)

    return make_result(value, (logits,), _backward, 'softmax_ce')
