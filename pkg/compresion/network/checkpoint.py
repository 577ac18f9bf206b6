# compresion/network/checkpoint.py
import json
from pathlib import Path

from ..errors import DimensionError
from .params import flatten, unflatten
from .spec import BlockId, ResNetSpec

CHECKPOINT_VERSION = 1


def save_checkpoint(model, path, extra=None):
    """
    Contenedor JSON {version, spec, dropped, layout, values}. json serializa
    los float con repr, así que la ida y vuelta es exacta.
    """
    vector = flatten(model)
    document = {
        'version': CHECKPOINT_VERSION,
        'spec': model.spec.to_dict(),
        'dropped': [str(b) for b in sorted(model.dropped)],
        'layout': [
            {'name': e.name, 'offset': e.offset, 'shape': list(e.shape)} for e in vector.layout
        ],
        'values': vector.values.tolist(),
        'extra': extra or {},
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document))
    return path


def load_checkpoint(path):
    """Devuelve el ResNetModel guardado. OSError si el archivo no existe."""
    document = json.loads(Path(path).read_text())
    version = document.get('version')
    if version != CHECKPOINT_VERSION:
        raise DimensionError(f"{path}: versión de checkpoint no soportada: {version}")
    spec = ResNetSpec.from_dict(document['spec'])
    layout = [(e['name'], e['offset'], tuple(e['shape'])) for e in document['layout']]
    dropped = frozenset(BlockId.parse(b) for b in document['dropped'])
    return unflatten(layout, document['values'], spec, dropped)
