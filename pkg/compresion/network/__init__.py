from .spec import (
    BlockId, ResNetSpec, block_layer_names, head_name, layer_plan, stem_name, transition_name,
)
from .model import ResNetModel, build, count_flops, forward, forward_graph
from .params import LayoutEntry, ParamVector, flatten, layout_size, same_layout, unflatten
from .training import evaluate_classifier, train_teacher
from .checkpoint import load_checkpoint, save_checkpoint

__all__ = [
    'BlockId', 'ResNetSpec', 'block_layer_names', 'head_name', 'layer_plan', 'stem_name',
    'transition_name', 'ResNetModel', 'build', 'count_flops', 'forward', 'forward_graph',
    'LayoutEntry', 'ParamVector', 'flatten', 'layout_size', 'same_layout', 'unflatten',
    'evaluate_classifier', 'train_teacher', 'load_checkpoint', 'save_checkpoint',
]
