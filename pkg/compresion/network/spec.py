# compresion/network/spec.py
from dataclasses import dataclass
from typing import NamedTuple

from ..errors import InvalidBlockError


class BlockId(NamedTuple):
    """Bloque residual de dimensión identidad (etapa, índice dentro de la etapa)."""
    stage: int
    index: int

    def __str__(self):
        return f"stage{self.stage}.block{self.index}"

    @classmethod
    def parse(cls, value):
        """Acepta 'stage0.block1', (0, 1), [0, 1] o un BlockId."""
        if isinstance(value, BlockId):
            return value
        if isinstance(value, str):
            try:
                stage, block = value.split('.')
                return cls(int(stage.removeprefix('stage')), int(block.removeprefix('block')))
            except ValueError:
                raise InvalidBlockError(f"Identificador de bloque inválido: {value!r}") from None
        stage, index = value
        return cls(int(stage), int(index))


@dataclass(frozen=True)
class ResNetSpec:
    """
    Arquitectura stem → etapas de bloques residuales → head.

    stages: ((ancho, num_bloques), ...). Cada bloque de una etapa mapea
    ancho→ancho; las transiciones entre etapas son lineales + ReLU.
    """
    input_dim: int
    stages: tuple
    num_classes: int
    seed: int = 0

    def __post_init__(self):
        stages = tuple((int(width), int(blocks)) for width, blocks in self.stages)
        object.__setattr__(self, 'stages', stages)
        if self.input_dim < 1 or self.num_classes < 1:
            raise ValueError("input_dim y num_classes deben ser positivos")
        if not stages:
            raise ValueError("La red necesita al menos una etapa")
        for width, blocks in stages:
            if width < 1:
                raise ValueError(f"Ancho de etapa inválido: {width}")
            if blocks < 0:
                raise ValueError(f"Número de bloques inválido: {blocks}")

    @property
    def feature_dim(self):
        return self.stages[-1][0]

    def blocks(self):
        """Todos los bloques eliminables, en orden de forward."""
        return [
            BlockId(stage, index)
            for stage, (_, count) in enumerate(self.stages)
            for index in range(count)
        ]

    def check_block(self, block):
        block = BlockId.parse(block)
        if not (0 <= block.stage < len(self.stages)) or not (0 <= block.index < self.stages[block.stage][1]):
            raise InvalidBlockError(f"El bloque {block} no existe en la arquitectura")
        return block

    def to_dict(self):
        return {
            'input_dim': self.input_dim,
            'stages': [list(stage) for stage in self.stages],
            'num_classes': self.num_classes,
            'seed': self.seed,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            input_dim=data['input_dim'],
            stages=tuple(tuple(stage) for stage in data['stages']),
            num_classes=data['num_classes'],
            seed=data.get('seed', 0),
        )


def stem_name():
    return 'stem'


def transition_name(stage):
    return f'transition{stage}'


def head_name():
    return 'head'


def block_layer_names(block):
    return f'{block}.fc1', f'{block}.fc2'


def layer_plan(spec, dropped=frozenset(), hidden=None):
    """
    Capas lineales presentes en orden de forward: [(nombre, salida, entrada)].
    `hidden` permite anchos internos reducidos por bloque (filtros podados).
    """
    hidden = hidden or {}
    plan = [(stem_name(), spec.stages[0][0], spec.input_dim)]
    for stage, (width, count) in enumerate(spec.stages):
        for index in range(count):
            block = BlockId(stage, index)
            if block in dropped:
                continue
            inner = hidden.get(block, width)
            fc1, fc2 = block_layer_names(block)
            plan.append((fc1, inner, width))
            plan.append((fc2, width, inner))
        if stage + 1 < len(spec.stages):
            plan.append((transition_name(stage), spec.stages[stage + 1][0], width))
    plan.append((head_name(), spec.num_classes, spec.feature_dim))
    return plan
