# compresion/network/params.py
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import DimensionError
from .model import ResNetModel
from .spec import BlockId, layer_plan


class LayoutEntry(NamedTuple):
    name: str
    offset: int
    shape: tuple


@dataclass(frozen=True)
class ParamVector:
    """Parámetros aplanados + tabla (nombre, offset, forma) para reconstruirlos."""
    values: np.ndarray
    layout: tuple

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'layout', tuple(LayoutEntry(n, int(o), tuple(s)) for n, o, s in self.layout))
        if values.ndim != 1 or values.size != layout_size(self.layout):
            raise DimensionError(
                f"ParamVector: {values.size} valores para un layout de {layout_size(self.layout)}"
            )

    def __len__(self):
        return self.values.size


def layout_size(layout):
    return sum(int(np.prod(entry[2], dtype=np.int64)) for entry in layout)


def flatten(model):
    layout = []
    chunks = []
    offset = 0
    for name in model.param_names():
        value = model.params[name]
        layout.append(LayoutEntry(name, offset, value.shape))
        chunks.append(value.ravel())
        offset += value.size
    values = np.concatenate(chunks) if chunks else np.zeros(0)
    return ParamVector(values, tuple(layout))


def _hidden_from_layout(layout, spec):
    shapes = {entry.name: entry.shape for entry in layout}
    hidden = {}
    for block in spec.blocks():
        shape = shapes.get(f'{block}.fc1.W')
        if shape is not None:
            hidden[block] = shape[0]
    return hidden


def unflatten(layout, values, spec, dropped=frozenset()):
    """Reconstruye el modelo; el layout debe corresponder a (spec, dropped)."""
    vector = ParamVector(values.values if isinstance(values, ParamVector) else values, layout)
    layout = vector.layout
    dropped = frozenset(BlockId.parse(b) for b in dropped)

    expected = []
    for layer, fan_out, fan_in in layer_plan(spec, dropped, _hidden_from_layout(layout, spec)):
        expected.append((f'{layer}.W', (fan_out, fan_in)))
        expected.append((f'{layer}.b', (fan_out,)))
    found = [(entry.name, entry.shape) for entry in layout]
    if found != expected:
        raise DimensionError("El layout no corresponde a la arquitectura y bloques eliminados dados")

    params = {}
    for entry in layout:
        size = int(np.prod(entry.shape, dtype=np.int64))
        params[entry.name] = vector.values[entry.offset:entry.offset + size].reshape(entry.shape).copy()
    return ResNetModel(spec, params, dropped)


def same_layout(a, b):
    return tuple(a.layout) == tuple(b.layout)
