# compresion/data/datasets.py
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import DatasetError

TRAIN = 'train'
HELDOUT = 'heldout'


@dataclass(frozen=True)
class Dataset:
    """
    Datos tabulares estandarizados (media 0, std 1 por feature en el split de
    entrenamiento). `y` es None en las vistas sin etiquetas.
    """
    X: np.ndarray
    y: np.ndarray
    split: np.ndarray
    num_classes: int
    mean: np.ndarray
    std: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        X = np.array(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise DatasetError(f"X debe ser 2D, forma {X.shape}")
        if not np.all(np.isfinite(X)):
            raise DatasetError("El dataset contiene valores no finitos")
        split = np.asarray(self.split, dtype=object)
        if split.shape != (X.shape[0],):
            raise DatasetError("Hay que etiquetar cada fila con su split")
        y = self.y
        if y is not None:
            y = np.asarray(y, dtype=np.int64)
            if y.shape != (X.shape[0],):
                raise DatasetError(f"{y.shape[0]} etiquetas para {X.shape[0]} filas")
            if y.size and (y.min() < 0 or y.max() >= self.num_classes):
                raise DatasetError(f"Etiquetas fuera de [0, {self.num_classes})")
        for name, value in (('X', X), ('y', y), ('split', split)):
            if value is not None:
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    def __len__(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    @property
    def labeled(self):
        return self.y is not None

    def subset(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return replace(
            self,
            X=self.X[idx],
            y=None if self.y is None else self.y[idx],
            split=self.split[idx],
        )

    def train(self):
        return self.subset(np.flatnonzero(self.split == TRAIN))

    def heldout(self):
        return self.subset(np.flatnonzero(self.split == HELDOUT))

    def unlabeled(self):
        return replace(self, y=None)

    def check_train_classes(self):
        """Todo dataset completo debe tener cada clase en su split de entrenamiento."""
        labels = self.require_labels()[self.split == TRAIN]
        missing = sorted(set(range(self.num_classes)) - set(labels.tolist()))
        if missing:
            raise DatasetError(f"Clases sin filas de entrenamiento: {missing}")
        return self

    def require_labels(self):
        if self.y is None:
            raise DatasetError("Este método necesita la vista con etiquetas del dataset")
        return self.y

    def union(self, other):
        labels = None
        if self.y is not None and other.y is not None:
            labels = np.concatenate([self.y, other.y])
        return replace(
            self,
            X=np.concatenate([self.X, other.X]),
            y=labels,
            split=np.concatenate([self.split, other.split]),
        )


def standardize(X_train, X_all):
    mean = X_train.mean(axis=0)
    std = X_train.std(axis=0)
    std = np.where(std > 0, std, 1.0)
    return (X_all - mean) / std, mean, std


def generate_gaussian_mixture(K, d, n_per_class, class_sep, seed, heldout_per_class=None):
    """
    K nubes gaussianas de covarianza identidad cuyos centros están sobre una
    esfera aleatoria de radio `class_sep`. Las filas de entrenamiento van
    primero (mezcladas), luego las de validación.
    """
    if K < 2 or d < 2:
        raise DatasetError("Se necesitan K >= 2 clases y d >= 2 dimensiones")
    if n_per_class < 1:
        raise DatasetError("n_per_class debe ser positivo")
    heldout_per_class = n_per_class if heldout_per_class is None else heldout_per_class

    rng = np.random.default_rng(seed)
    directions = rng.standard_normal((K, d))
    means = class_sep * directions / np.linalg.norm(directions, axis=1, keepdims=True)

    def draw(count):
        labels = np.repeat(np.arange(K), count)
        points = means[labels] + rng.standard_normal((labels.size, d))
        order = rng.permutation(labels.size)
        return points[order], labels[order]

    X_train, y_train = draw(n_per_class)
    X_held, y_held = draw(heldout_per_class)
    X_all = np.concatenate([X_train, X_held])
    X_all, mean, std = standardize(X_train, X_all)

    split = np.array([TRAIN] * y_train.size + [HELDOUT] * y_held.size, dtype=object)
    meta = {'K': K, 'd': d, 'n_per_class': n_per_class, 'heldout_per_class': heldout_per_class,
            'class_sep': class_sep, 'seed': seed}
    dataset = Dataset(X_all, np.concatenate([y_train, y_held]), split, K, mean, std, meta)
    return dataset.check_train_classes()


def sample_tiny(dataset, m, seed, labeled=False):
    """
    Muestra uniforme sin reemplazo de m filas del split de entrenamiento.
    Por defecto sin etiquetas: el pipeline de compresión nunca las lee.
    """
    train = dataset.train()
    if m < 1 or m > len(train):
        raise DatasetError(f"No se pueden muestrear {m} filas de {len(train)} de entrenamiento")
    rng = np.random.default_rng(seed)
    tiny = train.subset(rng.permutation(len(train))[:m])
    return tiny if labeled else tiny.unlabeled()


def sample_tiny_pair(dataset, m, seed, labeled=False):
    """Dos conjuntos pequeños disjuntos A y B de m filas cada uno."""
    train = dataset.train()
    if m < 1 or 2 * m > len(train):
        raise DatasetError(f"No caben dos muestras disjuntas de {m} en {len(train)} filas")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(train))
    a, b = train.subset(order[:m]), train.subset(order[m:2 * m])
    if labeled:
        return a, b
    return a.unlabeled(), b.unlabeled()
