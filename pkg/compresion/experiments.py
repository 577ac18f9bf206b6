# compresion/experiments.py
"""
Composición de los módulos para los comandos: configuración resuelta,
semillas por módulo, directorios de salida, registro de ejecuciones y las
líneas base de comparación (drop_first_k, curl_like_l2, curl_like_kl,
poda de filtros con FLOPs equivalentes).
"""
import json
import logging
import zlib
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import pandas as pd
from django.conf import settings
from django.utils import timezone
from scipy.special import log_softmax

from . import autodiff as ad
from .compress import FilterPruneSpec, drop_block, drop_blocks, shrink_filters
from .data import generate_gaussian_mixture, read_csv, sample_tiny, sample_tiny_pair
from .errors import ConfigError, DatasetError
from .models import BlockScoreRecord, ExperimentRun
from .network import ResNetSpec, count_flops, forward, load_checkpoint
from .practise import FinetuneConfig, PractiseConfig, latency_ratio, measure_latency
from .serializers import ExperimentConfigSerializer

logger = logging.getLogger(__name__)

CONFIG_FILE = 'config.json'
METRICS_FILE = 'metrics.json'
SCORES_FILE = 'scores.csv'
TEACHER_FILE = 'teacher.json'
PRUNED_FILE = 'pruned.json'


# --- Configuración ---

def derive_seed(master, label):
    """Semilla de un módulo a partir de la maestra y una etiqueta estable."""
    sequence = np.random.SeedSequence([master, zlib.crc32(label.encode())])
    return int(sequence.generate_state(1)[0])


def parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_override(document, assignment):
    """'seccion.clave=valor' con el valor interpretado como JSON (o texto si no lo es)."""
    if '=' not in assignment:
        raise ConfigError(f"--set espera clave=valor, recibido {assignment!r}")
    path, raw = assignment.split('=', 1)
    keys = path.strip().split('.')
    node = document
    for key in keys[:-1]:
        node = node.setdefault(key, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set {path}: '{key}' no es una sección")
    node[keys[-1]] = parse_value(raw)
    return document


def validate_config(document):
    serializer = ExperimentConfigSerializer(data=document)
    if not serializer.is_valid():
        raise ConfigError(f"Configuración inválida: {json.dumps(serializer.errors, ensure_ascii=False)}")
    # OrderedDict anidados → dict planos
    return json.loads(json.dumps(serializer.validated_data))


def load_config(path=None, overrides=(), seed=None):
    """
    Lee el documento JSON (o {} sin archivo), aplica los --set y --seed, y
    valida. OSError si el archivo no existe; ConfigError si no es válido.
    """
    document = {}
    if path:
        try:
            document = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: JSON inválido ({exc})") from None
    for assignment in overrides or ():
        apply_override(document, assignment)
    if seed is not None:
        document['seed'] = seed
    return validate_config(document)


def resolve_output_dir(config):
    path = Path(config['output_dir'])
    if not path.is_absolute():
        path = Path(settings.COMPRESION_OUTPUT_ROOT) / path
    path.mkdir(parents=True, exist_ok=True)
    return path


def write_json(path, data):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True, ensure_ascii=False))
    return path


def write_table(path, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(rows).to_csv(path, index=False, float_format='%.17g')
    return path


# --- Construcción de objetos desde la configuración ---

def build_dataset(config):
    section = config['dataset']
    if section['csv']:
        return read_csv(section['csv'])
    return generate_gaussian_mixture(
        section['K'], section['d'], section['n_per_class'], section['class_sep'],
        derive_seed(config['seed'], 'dataset'), section['heldout_per_class'],
    )


def build_spec(config, dataset, label='network'):
    return ResNetSpec(
        input_dim=dataset.dim,
        stages=tuple(tuple(stage) for stage in config['network']['stages']),
        num_classes=dataset.num_classes,
        seed=derive_seed(config['seed'], label),
    )


def schedule(lr, iters):
    return ad.LrSchedule(lr, max(1, iters))


def finetune_config(config):
    section = config['finetune']
    return FinetuneConfig(
        method=section['method'], iters=section['iters'], batch=section['batch'],
        lr=schedule(section['lr'], section['iters']), temperature=section['temperature'],
        scope=section['scope'], radius=config['compression']['radius'],
    )


def practise_config(config):
    compression, latency = config['compression'], config['latency']
    return PractiseConfig(
        radius=compression['radius'],
        adaptor_iters=compression['adaptor_iters'],
        adaptor_lr=schedule(compression['adaptor_lr'], compression['adaptor_iters']),
        adaptor_batch=compression['adaptor_batch'],
        latency_trials=latency['trials'],
        latency_warmup=latency['warmup'],
        latency_batch=latency['batch'],
        finetune=finetune_config(config),
        greedy=compression['greedy'],
        seed=derive_seed(config['seed'], 'practise'),
    )


def teacher_path(config, output_dir):
    return Path(config['teacher_checkpoint']) if config['teacher_checkpoint'] else output_dir / TEACHER_FILE


def load_teacher(config, output_dir):
    """OSError si el checkpoint no existe."""
    path = teacher_path(config, output_dir)
    if not path.exists():
        raise FileNotFoundError(f"No existe el checkpoint del profesor: {path}")
    return load_checkpoint(path)


# --- Líneas base ---

def drop_first_k(model, k):
    """Los k primeros bloques en orden de forward."""
    blocks = model.active_blocks()
    if not 0 <= k <= len(blocks):
        raise ConfigError(f"k={k} fuera de rango: hay {len(blocks)} bloques eliminables")
    return blocks[:k]


def curl_like_scores(teacher, tiny_set, criterion='l2'):
    """
    Cambio en la salida al quitar cada bloque, sin ajuste: distancia L2 de
    features ('l2') o KL entre las predicciones softmax ('kl'). Orden
    ascendente, empates por el bloque menor.
    """
    X = tiny_set.X
    feature, logits = forward(teacher, X)
    scores = []
    for block in teacher.active_blocks():
        dropped_feature, dropped_logits = forward(drop_block(teacher, block), X)
        if criterion == 'l2':
            value = ad.feature_mse(dropped_feature, feature).item()
        elif criterion == 'kl':
            log_p = log_softmax(logits, axis=1)
            kl = np.sum(np.exp(log_p) * (log_p - log_softmax(dropped_logits, axis=1)), axis=1)
            value = float(np.mean(kl))
        else:
            raise ConfigError(f"Criterio desconocido: {criterion!r}")
        scores.append((value, block))
    return sorted(scores)


def matched_filter_ratio(model, target_reduction):
    """Ratio de poda de filtros cuyo ahorro de FLOPs más se acerca a `target_reduction`."""
    base = count_flops(model)
    widths = sorted(set(model.hidden.values()))
    candidates = sorted({(c + 0.5) / w for w in widths for c in range(1, w)})
    if not candidates:
        raise ConfigError("No hay bloques con filtros que podar")

    def distance(ratio):
        reduction = base - count_flops(shrink_filters(model, FilterPruneSpec(ratio)))
        return abs(reduction - target_reduction), ratio

    return min(candidates, key=distance)


def matched_latency_ratio(model, blocks, input_shape, trials, warmup, seed=0):
    """
    Ratio de poda de filtros cuyo τ medido más se acerca al de quitar
    `blocks`. Devuelve (ratio, τ objetivo, τ conseguido). Los ratios que podan
    las mismas unidades se miden una sola vez.
    """
    base = measure_latency(model, input_shape, trials, warmup, seed)
    dropped = measure_latency(drop_blocks(model, blocks), input_shape, trials, warmup, seed)
    target = latency_ratio(base, dropped, clamp=False)

    widths = sorted(set(model.hidden.values()))
    measured = {}
    for ratio in sorted({(c + 0.5) / w for w in widths for c in range(1, w)}):
        spec = FilterPruneSpec(ratio)
        counts = tuple(spec.count(width) for width in model.hidden.values())
        if counts in measured:
            continue
        shrunk = measure_latency(shrink_filters(model, spec), input_shape, trials, warmup, seed)
        measured[counts] = (ratio, latency_ratio(base, shrunk, clamp=False))
    if not measured:
        raise ConfigError("No hay bloques con filtros que podar")
    ratio, achieved = min(measured.values(), key=lambda item: (abs(item[1] - target), item[0]))
    logger.info("Ratio de filtros %.6g: τ=%.4f frente a τ=%.4f de los bloques", ratio, achieved, target)
    return ratio, target, achieved


def flops_of_dropping(model, blocks):
    return count_flops(model) - count_flops(drop_blocks(model, blocks))


# --- Registro de ejecuciones ---

@contextmanager
def registered_run(command, config, output_dir):
    """ExperimentRun abierto durante el comando; se cierra como completado o fallido."""
    run = ExperimentRun.objects.create(
        command=command, seed=config['seed'], output_dir=str(output_dir), config=config,
    )
    try:
        yield run
    except Exception as exc:
        run.status = ExperimentRun.FAILED
        run.error = str(exc)
        run.finished_at = timezone.now()
        run.save()
        raise
    run.status = ExperimentRun.SUCCESS
    run.finished_at = timezone.now()
    run.save()


def record_scores(run, rows, chosen):
    chosen = {str(b) for b in chosen}
    BlockScoreRecord.objects.bulk_create([
        BlockScoreRecord(
            run=run, stage=row['stage'], index=row['index'],
            recoverability=row.get('recoverability', 0.0), tau=row.get('tau', 0.0),
            score=row['score'], latency_mean_ms=row.get('latency_mean_ms'),
            latency_std_ms=row.get('latency_std_ms'), chosen=row['block'] in chosen,
        )
        for row in rows
    ])


def tiny_sets(config, dataset, pair=False, labeled=None):
    """Conjunto(s) pequeño(s) de la configuración; un m imposible es un error de configuración."""
    m = config['tiny']['m']
    labeled = config['tiny']['labeled'] if labeled is None else labeled
    seed = derive_seed(config['seed'], 'tiny')
    try:
        if pair:
            return sample_tiny_pair(dataset, m, seed, labeled)
        return sample_tiny(dataset, m, seed, labeled)
    except DatasetError as exc:
        raise ConfigError(str(exc)) from None


def evaluation_set(dataset):
    """Split de validación; si el dataset no tiene, el de entrenamiento."""
    heldout = dataset.heldout()
    return heldout if len(heldout) else dataset.train()
