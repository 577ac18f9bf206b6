# compresion/landscape/export.py
import json
from pathlib import Path

import pandas as pd

from .diagnostics import summarize
from .interpolation import InterpolationCurve


def sidecar_path(path):
    return Path(path).with_suffix('.json')


def write_curve(curve, path):
    """CSV `lambda,loss` más un JSON al lado con metadatos de extremos y diagnósticos."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({'lambda': curve.lambdas, 'loss': curve.losses}).to_csv(
        path, index=False, float_format='%.17g'
    )
    sidecar = {'endpoints': curve.endpoints_meta, 'diagnostics': summarize(curve)}
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2, default=str))
    return path


def read_curve(path):
    frame = pd.read_csv(path, float_precision='round_trip')
    meta = {}
    if sidecar_path(path).exists():
        meta = json.loads(sidecar_path(path).read_text()).get('endpoints', {})
    return InterpolationCurve(frame['lambda'].to_numpy(), frame['loss'].to_numpy(), meta)


def diagnostics_table(curves):
    """{nombre: curva} → DataFrame con una fila de diagnósticos por curva."""
    rows = [{'pair': name, **summarize(curve)} for name, curve in curves.items()]
    return pd.DataFrame(rows)
