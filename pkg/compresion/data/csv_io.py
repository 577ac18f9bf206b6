# compresion/data/csv_io.py
import json
import re
from pathlib import Path

import numpy as np
import pandas as pd

from ..errors import DatasetError
from .datasets import TRAIN, Dataset, standardize

LABEL_COLUMN = 'label'
FLOAT_FORMAT = '%.17g'


def manifest_path(path):
    path = Path(path)
    return path.with_name(f'{path.stem}.manifest.json')


def write_csv(dataset, path):
    """
    Escribe `f0..f{d-1},label` con 17 dígitos significativos (ida y vuelta
    exacta en float64) y el manifiesto JSON al lado.
    """
    labels = dataset.require_labels()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    frame = pd.DataFrame(dataset.X, columns=[f'f{j}' for j in range(dataset.dim)])
    frame[LABEL_COLUMN] = labels
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)

    manifest = {
        'K': dataset.num_classes,
        'd': dataset.dim,
        'n': len(dataset),
        'n_train': int(np.sum(dataset.split == TRAIN)),
        'seed': dataset.meta.get('seed'),
        'class_sep': dataset.meta.get('class_sep'),
        'mean': dataset.mean.tolist(),
        'std': dataset.std.tolist(),
        'split': dataset.split.tolist(),
    }
    manifest_path(path).write_text(json.dumps(manifest, indent=2))
    return path


def _line_of(row):
    # +1 por la cabecera, +1 porque las líneas se cuentan desde 1
    return int(row) + 2


def read_csv(path):
    """
    Lee un CSV `f0..f{d-1},label`. Si existe el manifiesto se toman de él el
    split y las estadísticas (los datos ya vienen estandarizados); si no, todas
    las filas son de entrenamiento y se estandarizan aquí.
    """
    path = Path(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False)
    except pd.errors.ParserError as exc:
        match = re.search(r'line (\d+)', str(exc))
        where = f" (línea {match.group(1)})" if match else ''
        raise DatasetError(f"{path}: filas irregulares{where}: {exc}") from None
    except pd.errors.EmptyDataError:
        raise DatasetError(f"{path}: archivo vacío") from None

    if LABEL_COLUMN not in frame.columns:
        raise DatasetError(f"{path}: falta la columna '{LABEL_COLUMN}'")
    features = [c for c in frame.columns if c != LABEL_COLUMN]
    expected = [f'f{j}' for j in range(len(features))]
    if features != expected:
        raise DatasetError(f"{path}: cabecera inválida, se esperaba {expected + [LABEL_COLUMN]}")
    if frame.empty:
        raise DatasetError(f"{path}: no hay filas de datos")

    missing = frame.isna() | (frame == '')
    if missing.any(axis=None):
        row = int(np.flatnonzero(missing.any(axis=1).to_numpy())[0])
        raise DatasetError(f"{path}: fila incompleta en la línea {_line_of(row)}")

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    bad = numeric.isna().any(axis=1).to_numpy()
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise DatasetError(f"{path}: valor no numérico en la línea {_line_of(row)}")

    raw_labels = numeric[LABEL_COLUMN].to_numpy(dtype=np.float64)
    not_integer = raw_labels != np.round(raw_labels)
    if not_integer.any():
        row = int(np.flatnonzero(not_integer)[0])
        raise DatasetError(f"{path}: etiqueta no entera en la línea {_line_of(row)}")
    labels = raw_labels.astype(np.int64)
    # float() de numpy redondea correctamente las 17 cifras
    X = frame[features].to_numpy(dtype=str).astype(np.float64)

    manifest_file = manifest_path(path)
    if manifest_file.exists():
        manifest = json.loads(manifest_file.read_text())
        if manifest['n'] != len(frame) or manifest['d'] != len(features):
            raise DatasetError(f"{manifest_file}: el manifiesto no corresponde al CSV")
        meta = {'seed': manifest.get('seed'), 'class_sep': manifest.get('class_sep'), 'source': str(path)}
        return Dataset(
            X, labels, np.array(manifest['split'], dtype=object), int(manifest['K']),
            np.array(manifest['mean']), np.array(manifest['std']), meta,
        ).check_train_classes()

    X, mean, std = standardize(X, X)
    split = np.array([TRAIN] * len(frame), dtype=object)
    num_classes = int(labels.max()) + 1
    dataset = Dataset(X, labels, split, max(num_classes, 2), mean, std, {'source': str(path)})
    return dataset.check_train_classes()
