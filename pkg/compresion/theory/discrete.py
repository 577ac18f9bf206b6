# compresion/theory/discrete.py
"""
Verificación exacta, por sumas finitas, de las identidades de KL sobre
distribuciones conjuntas discretas p(y, f) y q(y, f).
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import rel_entr

from .reports import ClaimReport

SUPPORT_FLOOR = 1e-9
NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteJoint:
    """Tabla p(y, f) de forma (|Y|, |F|) con soporte completo."""
    table: np.ndarray

    def __post_init__(self):
        table = np.array(self.table, dtype=np.float64)
        if table.ndim != 2:
            raise ValueError(f"La tabla conjunta debe ser 2D, forma {table.shape}")
        if np.any(table < SUPPORT_FLOOR):
            raise ValueError("La conjunta necesita soporte completo (entradas >= 1e-9)")
        if abs(table.sum() - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"La conjunta suma {table.sum()!r}, no 1")
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)

    @property
    def shape(self):
        return self.table.shape

    def marginal_y(self):
        return self.table.sum(axis=1)

    def marginal_f(self):
        return self.table.sum(axis=0)

    def conditional_y_given_f(self):
        """Columna j: p(y | f_j)."""
        return self.table / self.marginal_f()[None, :]


def random_joint(rng, shape):
    """Dirichlet uniforme sobre las celdas; se regenera si alguna queda bajo el piso de soporte."""
    while True:
        table = rng.dirichlet(np.ones(shape[0] * shape[1])).reshape(shape)
        if table.min() >= SUPPORT_FLOOR:
            return DiscreteJoint(table / table.sum())


def kl(p, q):
    return float(np.sum(rel_entr(p, q)))


def kl_joint(p, q):
    return kl(p.table, q.table)


def kl_marginal_y(p, q):
    return kl(p.marginal_y(), q.marginal_y())


def decompose_kl(p, q):
    """
    KL[p(y,f)||q(y,f)] = E_p(f)[−ln q(f)] + E_p(f) KL[p(y|f)||q(y|f)] + C,
    con C = E_p(f)[ln p(f)]. Devuelve (imitación, clasificación, C).
    """
    pf, qf = p.marginal_f(), q.marginal_f()
    mimic = float(-np.sum(pf * np.log(qf)))
    conditional = np.sum(rel_entr(p.conditional_y_given_f(), q.conditional_y_given_f()), axis=0)
    classification = float(np.sum(pf * conditional))
    constant = float(np.sum(pf * np.log(pf)))
    return mimic, classification, constant


def verify_claim1(trials=10_000, grid=(4, 4), seed=0):
    """KL de las marginales en y acotada por la KL conjunta, en `trials` pares aleatorios."""
    rng = np.random.default_rng(seed)
    margins = np.empty(trials)
    for trial in range(trials):
        p, q = random_joint(rng, grid), random_joint(rng, grid)
        margins[trial] = kl_joint(p, q) - kl_marginal_y(p, q)
    violations = int(np.sum(margins < -NORMALIZATION_TOL))
    return ClaimReport(
        claim='claim1', passed=violations == 0, trials=trials,
        predicted=0.0, empirical=float(margins.min()),
        details={'violations': violations, 'min_margin': float(margins.min()), 'grid': list(grid)},
    )


def verify_claim2(trials=1000, grid=(3, 5), seed=0):
    """Error máximo de la descomposición de la KL conjunta en imitación + clasificación + C."""
    rng = np.random.default_rng(seed)
    errors = np.empty(trials)
    for trial in range(trials):
        p, q = random_joint(rng, grid), random_joint(rng, grid)
        mimic, classification, constant = decompose_kl(p, q)
        errors[trial] = abs(kl_joint(p, q) - (mimic + classification + constant))
    max_error = float(errors.max())
    return ClaimReport(
        claim='claim2', passed=max_error < 1e-10, trials=trials,
        predicted=0.0, empirical=max_error,
        details={'max_identity_error': max_error, 'grid': list(grid)},
    )
