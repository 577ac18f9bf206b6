# compresion/compress/pruning.py
"""
Primitivas de compresión: poner un bloque a cero (la red sigue igual), quitarlo
de la arquitectura, y la poda de filtros por norma L1 como línea base.
"""
import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError
from ..network.model import ResNetModel
from ..network.spec import block_layer_names

L1_NORM = 'l1'


def zero_block(model, block):
    """W1, b1, W2, b2 del bloque a cero; solo queda el camino identidad."""
    block = model.check_droppable(block)
    zeroed = model.clone()
    for name in model.block_param_names(block):
        zeroed.params[name] = np.zeros_like(zeroed.params[name])
    return zeroed


def drop_block(model, block):
    block = model.check_droppable(block)
    removed = set(model.block_param_names(block))
    params = {k: v.copy() for k, v in model.params.items() if k not in removed}
    return ResNetModel(model.spec, params, model.dropped | {block})


def drop_blocks(model, blocks):
    for block in blocks:
        model = drop_block(model, block)
    return model


@dataclass(frozen=True)
class FilterPruneSpec:
    """Poda de unidades ocultas dentro de cada rama residual, por norma L1 de las filas de W1."""
    ratio: float
    criterion: str = L1_NORM

    def __post_init__(self):
        if not 0 < self.ratio < 1:
            raise ConfigError(f"El ratio de poda debe estar en (0, 1), recibido {self.ratio}")
        if self.criterion != L1_NORM:
            raise ConfigError(f"Criterio de poda no soportado: {self.criterion!r}")

    def count(self, width):
        # Siempre sobrevive al menos una unidad
        return min(math.floor(self.ratio * width), width - 1)


def select_filters(model, spec):
    """
    {bloque: índices podados}. Las filas de menor norma L1 primero; los
    empates se resuelven por el índice menor (argsort estable).
    """
    selection = {}
    for block in model.active_blocks():
        fc1, _ = block_layer_names(block)
        W1 = model.params[f'{fc1}.W']
        count = spec.count(W1.shape[0])
        if count <= 0:
            continue
        norms = np.abs(W1).sum(axis=1)
        selection[block] = np.sort(np.argsort(norms, kind='stable')[:count])
    return selection


def prune_filters(model, spec):
    """Forma de paso 1: las unidades elegidas se ponen a cero (filas de W1, b1 y columnas de W2)."""
    pruned = model.clone()
    for block, units in select_filters(model, spec).items():
        fc1, fc2 = block_layer_names(block)
        pruned.params[f'{fc1}.W'][units, :] = 0.0
        pruned.params[f'{fc1}.b'][units] = 0.0
        pruned.params[f'{fc2}.W'][:, units] = 0.0
    return pruned


def shrink_filters(model, spec):
    """Forma arquitectónica: elimina físicamente las mismas unidades que prune_filters."""
    shrunk = model.clone()
    for block, units in select_filters(model, spec).items():
        fc1, fc2 = block_layer_names(block)
        keep = np.setdiff1d(np.arange(model.params[f'{fc1}.W'].shape[0]), units)
        shrunk.params[f'{fc1}.W'] = model.params[f'{fc1}.W'][keep, :].copy()
        shrunk.params[f'{fc1}.b'] = model.params[f'{fc1}.b'][keep].copy()
        shrunk.params[f'{fc2}.W'] = model.params[f'{fc2}.W'][:, keep].copy()
    return shrunk
