# compresion/network/training.py
import logging

import numpy as np

from .. import autodiff as ad
from ..errors import DatasetError
from .model import forward, forward_graph

logger = logging.getLogger(__name__)


def train_teacher(model, dataset, iters, lr_schedule, batch, seed):
    """
    Entrena todos los parámetros con entropía cruzada (T=1) sobre el split de
    entrenamiento. Devuelve (modelo, traza de pérdidas); iters=0 devuelve una
    copia sin cambios.
    """
    train = dataset.train()
    if len(train) == 0:
        raise DatasetError("train_teacher: el dataset no tiene filas de entrenamiento")
    labels = train.require_labels()
    X = train.X

    def loss_fn(leaves, idx):
        _, logits = forward_graph(model, X[idx], params=leaves)
        return ad.softmax_ce(logits, labels[idx])

    params, trace = ad.minimize_sgd(
        model.params, model.param_names(), loss_fn,
        n_samples=len(train), iters=iters, schedule=lr_schedule.with_total(iters),
        batch=batch, seed=seed, label='train_teacher',
    )
    return model.with_params(params), trace


def evaluate_classifier(model, dataset):
    """Pérdida de entropía cruzada y accuracy sobre todas las filas dadas."""
    if len(dataset) == 0:
        raise DatasetError("evaluate_classifier: dataset vacío")
    labels = dataset.require_labels()
    _, logits = forward(model, dataset.X)
    loss = ad.softmax_ce(logits, labels).item()
    accuracy = float(np.mean(np.argmax(logits, axis=1) == labels))
    return {'loss': loss, 'accuracy': accuracy}
