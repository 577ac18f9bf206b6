# compresion/theory/reports.py
import math
from dataclasses import dataclass, field


def _clean(value):
    # JSON no admite inf/nan
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


@dataclass
class ClaimReport:
    """Resultado de una verificación: {claim, n, trials, predicted, empirical, ratio, pass}."""
    claim: str
    passed: bool
    trials: int
    n: int = None
    predicted: object = None
    empirical: object = None
    ratio: object = None
    hard: bool = True
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return _clean({
            'claim': self.claim,
            'n': self.n,
            'trials': self.trials,
            'predicted': self.predicted,
            'empirical': self.empirical,
            'ratio': self.ratio,
            'pass': bool(self.passed),
            'hard': self.hard,
            'details': self.details,
        })
