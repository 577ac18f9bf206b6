from .pruning import (
    FilterPruneSpec, drop_block, drop_blocks, prune_filters, select_filters, shrink_filters, zero_block,
)
from .adaptors import (
    AFTER, ALL, BEFORE, AdaptorSet, adaptor_positions, fuse_adaptors, insert_adaptors, param_name,
)

__all__ = [
    'FilterPruneSpec', 'drop_block', 'drop_blocks', 'prune_filters', 'select_filters',
    'shrink_filters', 'zero_block', 'AFTER', 'ALL', 'BEFORE', 'AdaptorSet',
    'adaptor_positions', 'fuse_adaptors', 'insert_adaptors', 'param_name',
]
