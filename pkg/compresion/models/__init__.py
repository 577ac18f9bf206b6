# compresion/models/__init__.py
from .experiment_run import ExperimentRun
from .block_score_record import BlockScoreRecord


__all__ = [
    'ExperimentRun',
    'BlockScoreRecord',
]
