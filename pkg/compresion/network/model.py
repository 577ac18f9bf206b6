# compresion/network/model.py
import hashlib

import numpy as np

from .. import autodiff as ad
from ..errors import DimensionError, InvalidBlockError
from .spec import BlockId, block_layer_names, head_name, layer_plan, stem_name, transition_name


class ResNetModel:
    """
    Arquitectura + almacén de parámetros {'<capa>.W': (out, in), '<capa>.b': (out,)}.

    Bloque: block(x) = x + W2·relu(W1·x + b1) + b2. Los bloques en `dropped`
    no existen en el forward ni en los parámetros.
    """

    def __init__(self, spec, params, dropped=frozenset()):
        self.spec = spec
        self.params = {name: np.asarray(value, dtype=np.float64) for name, value in params.items()}
        self.dropped = frozenset(BlockId.parse(b) for b in dropped)

    def __repr__(self):
        dropped = ', '.join(str(b) for b in sorted(self.dropped)) or '-'
        return f"ResNetModel(stages={list(self.spec.stages)}, dropped=[{dropped}])"

    def clone(self):
        return ResNetModel(self.spec, {k: v.copy() for k, v in self.params.items()}, self.dropped)

    def with_params(self, params):
        return ResNetModel(self.spec, params, self.dropped)

    @property
    def hidden(self):
        """Ancho interno real de cada bloque presente."""
        widths = {}
        for block in self.active_blocks():
            fc1, _ = block_layer_names(block)
            widths[block] = self.params[f'{fc1}.W'].shape[0]
        return widths

    def active_blocks(self):
        return [b for b in self.spec.blocks() if b not in self.dropped]

    def check_droppable(self, block):
        block = self.spec.check_block(block)
        if block in self.dropped:
            raise InvalidBlockError(f"El bloque {block} ya fue eliminado")
        return block

    def layers(self):
        """[(nombre, salida, entrada)] de las capas presentes, en orden de forward."""
        return layer_plan(self.spec, self.dropped, self.hidden)

    def param_names(self):
        names = []
        for layer, _, _ in self.layers():
            names.extend((f'{layer}.W', f'{layer}.b'))
        return names

    def block_param_names(self, block):
        names = []
        for layer in block_layer_names(BlockId.parse(block)):
            names.extend((f'{layer}.W', f'{layer}.b'))
        return names

    def head_param_names(self):
        return [f'{head_name()}.W', f'{head_name()}.b']

    def checksum(self, names=None):
        """Huella SHA-256 de los parámetros indicados (todos por defecto)."""
        digest = hashlib.sha256()
        for name in (names or sorted(self.params)):
            digest.update(name.encode())
            digest.update(np.ascontiguousarray(self.params[name]).tobytes())
        return digest.hexdigest()


def build(spec):
    """
    Inicialización gaussiana escalada (std = 1/sqrt(fan_in)) y sesgos en cero,
    determinista por spec.seed.
    """
    rng = np.random.default_rng(spec.seed)
    params = {}
    for layer, fan_out, fan_in in layer_plan(spec):
        params[f'{layer}.W'] = rng.standard_normal((fan_out, fan_in)) / np.sqrt(fan_in)
        params[f'{layer}.b'] = np.zeros(fan_out)
    return ResNetModel(spec, params)


def _apply_layer(layer, h, params, adaptors):
    before = adaptors.get((layer, 'before'))
    if before is not None:
        h = ad.linear(h, before)
    h = ad.linear(h, params[f'{layer}.W'], params[f'{layer}.b'])
    after = adaptors.get((layer, 'after'))
    if after is not None:
        h = ad.linear(h, after)
    return h


def forward_graph(model, x, params=None, adaptors=None):
    """
    Forward sobre Tensores. `params` puede sustituir los parámetros del modelo
    por hojas entrenables; `adaptors` mapea (capa, lado) → matriz cuadrada.
    Devuelve (feature, logits) como Tensores.
    """
    x = ad.as_tensor(x)
    if x.ndim != 2 or x.shape[1] != model.spec.input_dim:
        raise DimensionError(
            f"Entrada de forma {x.shape}, se esperaba (b, {model.spec.input_dim})"
        )
    params = params if params is not None else model.params
    adaptors = adaptors or {}

    h = ad.relu(_apply_layer(stem_name(), x, params, adaptors))
    for stage, (_, count) in enumerate(model.spec.stages):
        for index in range(count):
            block = BlockId(stage, index)
            if block in model.dropped:
                continue
            fc1, fc2 = block_layer_names(block)
            branch = ad.relu(_apply_layer(fc1, h, params, adaptors))
            branch = _apply_layer(fc2, branch, params, adaptors)
            h = ad.add(h, branch)
        if stage + 1 < len(model.spec.stages):
            h = ad.relu(_apply_layer(transition_name(stage), h, params, adaptors))
    feature = h
    logits = _apply_layer(head_name(), feature, params, adaptors)
    return feature, logits


def forward(model, x, adaptors=None):
    """(feature, logits) como ndarrays, sin registrar grafo."""
    with ad.no_grad():
        feature, logits = forward_graph(model, x, adaptors=adaptors)
    return feature.numpy(), logits.numpy()


def count_flops(model):
    """2·filas·columnas por capa lineal presente, por muestra."""
    return sum(2 * fan_out * fan_in for _, fan_out, fan_in in model.layers())
