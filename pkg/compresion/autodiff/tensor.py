# compresion/autodiff/tensor.py
"""
Tensor denso (float64, row-major) con diferenciación automática en modo reverso.

Cada operación registra sus padres y una función que, dado el gradiente de la
salida, devuelve el gradiente de cada padre. El grafo es implícito: se recorre
desde el nodo de pérdida en orden topológico inverso.
"""
from contextlib import contextmanager

import numpy as np

from ..errors import DimensionError

_grad_enabled = True


@contextmanager
def no_grad():
    """Desactiva el registro del grafo (evaluación y mediciones de latencia)."""
    global _grad_enabled
    previous = _grad_enabled
    _grad_enabled = False
    try:
        yield
    finally:
        _grad_enabled = previous


def is_grad_enabled():
    return _grad_enabled


class Tensor:
    """
    Valor inmutable: `data` es un ndarray float64 de solo lectura.
    Las hojas entrenables se crean con requires_grad=True.
    """

    __slots__ = ('data', 'grad', 'requires_grad', '_prev', '_backward', '_op')

    def __init__(self, data, requires_grad=False, _children=(), _op=''):
        array = np.array(data, dtype=np.float64)
        array.setflags(write=False)
        self.data = array
        self.grad = None
        self.requires_grad = requires_grad
        self._prev = _children
        self._backward = None
        self._op = _op

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def is_leaf(self):
        return self._backward is None

    def numpy(self):
        """Copia escribible de los datos."""
        return np.array(self.data)

    def item(self):
        if self.data.size != 1:
            raise DimensionError(f"item() requiere un escalar, forma {self.shape}")
        return float(self.data.reshape(()))

    def __repr__(self):
        grad = ', requires_grad=True' if self.requires_grad else ''
        return f"Tensor(shape={self.shape}{grad})"


def make_result(data, parents, backward_fn, op):
    """
    Construye la salida de una operación. Si ningún padre requiere gradiente
    (o estamos dentro de no_grad) la salida es una constante sin grafo.
    """
    if not _grad_enabled or not any(p.requires_grad for p in parents):
        return Tensor(data)
    out = Tensor(data, requires_grad=True, _children=tuple(parents), _op=op)
    out._backward = backward_fn
    return out


def _topological_order(root):
    order = []
    visited = set()
    stack = [(root, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            order.append(node)
            continue
        if id(node) in visited:
            continue
        visited.add(id(node))
        stack.append((node, True))
        for parent in node._prev:
            if parent.requires_grad and id(parent) not in visited:
                stack.append((parent, False))
    return order


def backward(loss, accumulate=False):
    """
    Gradientes exactos de una pérdida escalar respecto a cada hoja entrenable
    alcanzable. Devuelve {hoja: gradiente}; también los deja en hoja.grad,
    sobrescribiendo salvo que accumulate=True.
    """
    if loss.data.size != 1:
        raise DimensionError(f"backward requiere una pérdida escalar, forma {loss.shape}")

    grads = {id(loss): np.ones_like(loss.data)}
    leaves = {}
    for node in reversed(_topological_order(loss)):
        g = grads.pop(id(node), None)
        if g is None:
            continue
        if node.is_leaf:
            leaves[node] = g
            continue
        for parent, parent_grad in zip(node._prev, node._backward(g)):
            if parent_grad is None or not parent.requires_grad:
                continue
            key = id(parent)
            grads[key] = grads[key] + parent_grad if key in grads else parent_grad

    for leaf, g in leaves.items():
        if accumulate and leaf.grad is not None:
            leaf.grad = leaf.grad + g
        else:
            leaf.grad = g
    return leaves
