# compresion/compress/adaptors.py
"""
Adaptadores: matrices cuadradas inicializadas a la identidad, pegadas a una
capa lineal por un lado.

  side='after'  y = A·(W·x + b)   ->  fusión W ← A·W, b ← A·b
  side='before' y = W·(A·x) + b   ->  fusión W ← W·A

Nunca se pegan al camino identidad de un bloque.
"""
from collections.abc import Mapping

import numpy as np

from ..errors import DimensionError, InvalidBlockError
from ..network.spec import BlockId, block_layer_names, head_name, stem_name, transition_name

AFTER = 'after'
BEFORE = 'before'
SIDES = (AFTER, BEFORE)
ALL = 'all'


class AdaptorSet(Mapping):
    """Mapa inmutable (capa, lado) → matriz cuadrada."""

    def __init__(self, entries=None):
        self._entries = {}
        for (layer, side), matrix in (entries or {}).items():
            if side not in SIDES:
                raise ValueError(f"Lado de adaptador inválido: {side!r}")
            matrix = np.array(matrix, dtype=np.float64)
            if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
                raise DimensionError(f"El adaptador ({layer}, {side}) no es cuadrado: {matrix.shape}")
            matrix.setflags(write=False)
            self._entries[(layer, side)] = matrix

    @classmethod
    def identity(cls, positions):
        """positions: {(capa, lado): ancho}."""
        return cls({key: np.eye(width) for key, width in positions.items()})

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(sorted(self._entries))

    def __len__(self):
        return len(self._entries)

    def __repr__(self):
        keys = ', '.join(f'{layer}:{side}' for layer, side in self)
        return f"AdaptorSet([{keys}])"

    def merge(self, other):
        """Unión de posiciones; ante una clave repetida se conserva la de `self`."""
        entries = dict(other._entries)
        entries.update(self._entries)
        return AdaptorSet(entries)

    def with_matrices(self, matrices):
        unknown = set(matrices) - set(self._entries)
        if unknown:
            raise DimensionError(f"Adaptadores inexistentes: {sorted(unknown)}")
        entries = dict(self._entries)
        entries.update(matrices)
        return AdaptorSet(entries)

    def is_identity(self):
        return all(np.array_equal(m, np.eye(m.shape[0])) for m in self._entries.values())


def param_name(key):
    """Nombre plano de un adaptador para los diccionarios de parámetros del optimizador."""
    layer, side = key
    return f'adaptor:{layer}:{side}'


def adaptor_positions(model, dropped, radius=ALL):
    """
    Posiciones conectadas al bloque eliminado dentro de su etapa:
    bloques anteriores a distancia ≤ radius (fc1 y fc2, lado after),
    bloques posteriores (lado before), la capa de entrada de la etapa
    (stem o transición, after) y la de salida (transición o head, before).
    """
    dropped = BlockId.parse(dropped)
    if dropped not in model.dropped:
        raise InvalidBlockError(f"El bloque {dropped} no fue eliminado del modelo")
    if radius != ALL and (not isinstance(radius, int) or radius < 0):
        raise ValueError(f"radius debe ser un entero >= 0 o '{ALL}', recibido {radius!r}")

    shapes = {name: (fan_out, fan_in) for name, fan_out, fan_in in model.layers()}
    positions = {}

    def attach(layer, side):
        fan_out, fan_in = shapes[layer]
        positions[(layer, side)] = fan_out if side == AFTER else fan_in

    stage, count = dropped.stage, model.spec.stages[dropped.stage][1]
    for index in range(count):
        block = BlockId(stage, index)
        distance = abs(index - dropped.index)
        if block in model.dropped or distance == 0:
            continue
        if radius != ALL and distance > radius:
            continue
        side = AFTER if index < dropped.index else BEFORE
        for layer in block_layer_names(block):
            attach(layer, side)

    attach(stem_name() if stage == 0 else transition_name(stage - 1), AFTER)
    last_stage = stage + 1 == len(model.spec.stages)
    attach(head_name() if last_stage else transition_name(stage), BEFORE)
    return positions


def insert_adaptors(pruned_model, dropped, radius=ALL):
    """Devuelve (modelo, AdaptorSet identidad); el modelo no se modifica."""
    return pruned_model, AdaptorSet.identity(adaptor_positions(pruned_model, dropped, radius))


def fuse_adaptors(model, adaptors):
    """
    Absorbe cada adaptador en su capa vecina. El resultado tiene la
    arquitectura podada original, sin sobrecoste.
    """
    shapes = {name: (fan_out, fan_in) for name, fan_out, fan_in in model.layers()}
    fused = model.clone()
    for (layer, side), matrix in adaptors.items():
        if layer not in shapes:
            raise DimensionError(f"El adaptador ({layer}, {side}) no corresponde a ninguna capa")
        W = fused.params[f'{layer}.W']
        expected = W.shape[0] if side == AFTER else W.shape[1]
        if matrix.shape[0] != expected:
            raise DimensionError(
                f"Adaptador ({layer}, {side}) de forma {matrix.shape} para pesos {W.shape}"
            )
        if side == AFTER:
            fused.params[f'{layer}.W'] = matrix @ W
            fused.params[f'{layer}.b'] = matrix @ fused.params[f'{layer}.b']
        else:
            fused.params[f'{layer}.W'] = W @ matrix
    return fused
