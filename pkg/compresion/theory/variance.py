# compresion/theory/variance.py
"""
Varianza de los parámetros estimados con pocos datos: cabeza lineal ajustada
por imitación de features (mínimos cuadrados) frente a cabeza softmax ajustada
por clasificación (máxima verosimilitud), comparadas con la inversa de la
información de Fisher.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import logsumexp, softmax
from scipy.stats import norm

from .. import autodiff as ad
from .reports import ClaimReport

logger = logging.getLogger(__name__)

OLS = 'ols'
SGD = 'sgd'
NEWTON_TOL = 1e-8
NEWTON_MAX_ITERS = 100
DIVERGENCE_BOUND = 50.0


@dataclass
class VarianceReport:
    n: int
    trials: int
    empirical_var: dict
    predicted_var: dict
    ratio: dict = field(init=False)
    means: dict = field(default_factory=dict)
    excluded: int = 0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.ratio = {
            name: self.empirical_var[name] / self.predicted_var[name]
            for name in self.predicted_var
        }

    def ratio_within(self, low, high):
        return all(low <= r <= high for r in self.ratio.values())

    def to_dict(self):
        return {
            'n': self.n,
            'trials': self.trials,
            'empirical_var': self.empirical_var,
            'predicted_var': self.predicted_var,
            'ratio': self.ratio,
            'means': self.means,
            'excluded': self.excluded,
            **self.details,
        }


def trial_generators(seed, trials):
    # Un generador por prueba: en serie o en paralelo las estadísticas son idénticas
    return [np.random.default_rng(child) for child in np.random.SeedSequence(seed).spawn(trials)]


def second_moment(dist):
    return float(dist.var() + dist.mean() ** 2)


# --- Imitación de features ---

def fit_ols(x, f):
    """Ecuaciones normales 2×2 de f ≈ w·x + b. None si el diseño es singular."""
    design = np.column_stack([x, np.ones_like(x)])
    gram = design.T @ design
    if abs(np.linalg.det(gram)) < 1e-12 * max(1.0, np.abs(gram).max()) ** 2:
        return None
    w, b = np.linalg.solve(gram, design.T @ f)
    return w, b


def fit_sgd(x, f, beta, iters=300, lr=0.2, seed=0):
    """Mismo ajuste por SGD de lote completo sobre la pérdida β·(ŵx + b̂ − f)²."""
    inputs = x[:, None]
    targets = f[:, None]

    def loss_fn(leaves, idx):
        return ad.feature_mse(ad.linear(inputs[idx], leaves['w'], leaves['b']), targets[idx], beta)

    params, _ = ad.minimize_sgd(
        {'w': np.zeros((1, 1)), 'b': np.zeros(1)}, ('w', 'b'), loss_fn,
        n_samples=x.size, iters=iters, schedule=ad.LrSchedule(lr, iters),
        batch=x.size, seed=seed, label='claim4 sgd',
    )
    return float(params['w'][0, 0]), float(params['b'][0])


def verify_claim4(n=100, beta=0.5, trials=2000, x_dist=None, seed=0, teacher=(1.0, 0.5),
                  fit=OLS, tolerance=0.15):
    """
    f = w̃x + b̃ + ε con ε ~ N(0, 1/(2β)); la varianza empírica de (ŵ, b̂)
    se compara con 1/(2nβE[x²]) y 1/(2nβ).
    """
    if n < 10:
        raise ValueError(f"n debe ser >= 10, recibido {n}")
    if trials < 500:
        raise ValueError(f"Se necesitan >= 500 pruebas, recibido {trials}")
    if fit not in (OLS, SGD):
        raise ValueError(f"Ajuste desconocido: {fit!r}")
    x_dist = x_dist or norm(0.0, 1.0)
    w_true, b_true = teacher
    noise = 1.0 / np.sqrt(2.0 * beta)

    estimates = np.empty((trials, 2))
    for trial, rng in enumerate(trial_generators(seed, trials)):
        fitted = None
        while fitted is None:
            x = x_dist.rvs(size=n, random_state=rng)
            f = w_true * x + b_true + rng.normal(0.0, noise, n)
            fitted = fit_ols(x, f) if fit == OLS else fit_sgd(x, f, beta, seed=trial)
        estimates[trial] = fitted

    ex2 = second_moment(x_dist)
    empirical = estimates.var(axis=0, ddof=1)
    return VarianceReport(
        n=n, trials=trials,
        empirical_var={'w': float(empirical[0]), 'b': float(empirical[1])},
        predicted_var={'w': 1.0 / (2 * n * beta * ex2), 'b': 1.0 / (2 * n * beta)},
        means={'w': float(estimates[:, 0].mean()), 'b': float(estimates[:, 1].mean())},
        details={'beta': beta, 'fit': fit, 'E_x2': ex2, 'tolerance': tolerance,
                 'teacher': {'w': w_true, 'b': b_true}},
    )


# --- Clasificación ---

@dataclass(frozen=True)
class SoftmaxTeacher:
    """Cabeza softmax sobre una feature escalar: logits = w·f + b (una entrada por clase)."""
    w: tuple
    b: tuple

    def __post_init__(self):
        if len(self.w) != len(self.b) or len(self.w) < 2:
            raise ValueError("El profesor necesita >= 2 clases con w y b del mismo largo")

    @property
    def classes(self):
        return len(self.w)

    def effective(self, temperature):
        """Logits efectivos (w/T, b/T): los que el alumno ajusta directamente."""
        return np.asarray(self.w) / temperature, np.asarray(self.b) / temperature

    def probabilities(self, f, temperature=1.0):
        w, b = self.effective(temperature)
        return softmax(np.outer(f, w) + b, axis=1)


def confident_teacher(epsilon):
    """Profesor de 2 clases con sensibilidad q(1−q) = epsilon constante en f."""
    if not 0 < epsilon <= 0.25:
        raise ValueError(f"epsilon debe estar en (0, 0.25], recibido {epsilon}")
    q = (1.0 + np.sqrt(1.0 - 4.0 * epsilon)) / 2.0
    return SoftmaxTeacher(w=(0.0, 0.0), b=(float(np.log(q / (1.0 - q))), 0.0))


DEFAULT_TEACHER = SoftmaxTeacher(w=(0.5, 0.0), b=(0.0, 0.0))


def fit_softmax_newton(f, y, pinned_w, pinned_b, init_w, init_b):
    """
    Máxima verosimilitud de (w_c, b_c) para las clases libres; la última clase
    queda fija en (pinned_w, pinned_b) para fijar el gauge del softmax.
    Devuelve (w, b, convergió).
    """
    n = f.size
    free = init_w.size
    theta = np.concatenate([init_w, init_b])
    onehot = np.eye(free + 1)[y][:, :free]
    design = np.column_stack([f, np.ones(n)])

    def objective(theta):
        logits = np.column_stack([np.outer(f, theta[:free]) + theta[free:], pinned_w * f + pinned_b])
        value = np.mean(logsumexp(logits, axis=1) - logits[np.arange(n), y])
        return value, softmax(logits, axis=1)[:, :free]

    value, probs = objective(theta)
    for _ in range(NEWTON_MAX_ITERS):
        residual = probs - onehot
        grad = np.concatenate([residual.T @ f, residual.sum(axis=0)]) / n
        if np.linalg.norm(grad) < NEWTON_TOL:
            return theta[:free], theta[free:], True
        # Hessiano por bloques (clase, clase) ⊗ [f, 1][f, 1]ᵀ, en el orden de theta
        cov = np.einsum('ic,cd->icd', probs, np.eye(free)) - np.einsum('ic,id->icd', probs, probs)
        outer = np.einsum('ia,ib->iab', design, design)
        hessian = np.einsum('icd,iab->acbd', cov, outer).reshape(2 * free, 2 * free) / n
        try:
            step = np.linalg.solve(hessian + 1e-12 * np.eye(2 * free), grad)
        except np.linalg.LinAlgError:
            return theta[:free], theta[free:], False
        size = 1.0
        candidate = theta - step
        new_value, new_probs = objective(candidate)
        # Lejos del óptimo se amortigua el paso; cerca, Newton puro
        while np.linalg.norm(grad) > 1e-4 and new_value > value and size > 1e-10:
            size *= 0.5
            candidate = theta - size * step
            new_value, new_probs = objective(candidate)
        theta, value, probs = candidate, new_value, new_probs
        if np.max(np.abs(theta)) > DIVERGENCE_BOUND:
            return theta[:free], theta[free:], False
    return theta[:free], theta[free:], False


def sensitivity(teacher, f_dist, temperature, samples=200_000, seed=0):
    """ε_c = E_f[q_c(1 − q_c)] bajo la distribución de features."""
    f = f_dist.rvs(size=samples, random_state=np.random.default_rng(seed))
    q = teacher.probabilities(f, temperature)
    return (q * (1.0 - q)).mean(axis=0)


def verify_claim5(n=200, temperature=1.0, trials=500, f_dist=None, seed=0, teacher=None):
    """
    Etiquetas muestreadas del softmax del profesor con temperatura T; el
    alumno ajusta sus logits por máxima verosimilitud. Las varianzas de
    (ŵ_c, b̂_c) se comparan con 1/(nε_cE[f²]) y 1/(nε_c). Las pruebas que no
    convergen (separación de clases) o en las que falta alguna clase se
    excluyen y se cuentan.
    """
    if temperature <= 0:
        raise ValueError(f"La temperatura debe ser positiva, recibido {temperature}")
    teacher = teacher or DEFAULT_TEACHER
    f_dist = f_dist or norm(0.0, 1.0)
    w_eff, b_eff = teacher.effective(temperature)
    free = teacher.classes - 1

    estimates = []
    excluded = 0
    for rng in trial_generators(seed, trials):
        f = f_dist.rvs(size=n, random_state=rng)
        q = teacher.probabilities(f, temperature)
        y = (q.cumsum(axis=1) > rng.random(n)[:, None]).argmax(axis=1)
        if np.unique(y).size < teacher.classes:
            # Falta alguna clase: el MLE está en el infinito
            excluded += 1
            continue
        w, b, converged = fit_softmax_newton(f, y, w_eff[-1], b_eff[-1], w_eff[:free], b_eff[:free])
        if not converged:
            excluded += 1
            continue
        estimates.append(np.concatenate([w, b]))
    if excluded:
        logger.info("claim5 n=%d T=%g: %d pruebas excluidas (sin convergencia o sin alguna clase)", n, temperature, excluded)

    names = [f'w{c}' for c in range(free)] + [f'b{c}' for c in range(free)]
    epsilon = sensitivity(teacher, f_dist, temperature, seed=seed)[:free]
    ef2 = second_moment(f_dist)
    predicted = {f'w{c}': 1.0 / (n * epsilon[c] * ef2) for c in range(free)}
    predicted.update({f'b{c}': 1.0 / (n * epsilon[c]) for c in range(free)})

    if len(estimates) >= 2:
        estimates = np.array(estimates)
        empirical = dict(zip(names, estimates.var(axis=0, ddof=1).tolist()))
        means = dict(zip(names, estimates.mean(axis=0).tolist()))
    else:
        # Sin estimaciones finitas la varianza del MLE es no acotada
        empirical = {name: float('inf') for name in names}
        means = {}
    return VarianceReport(
        n=n, trials=trials, empirical_var=empirical, predicted_var=predicted,
        means=means, excluded=excluded,
        details={'temperature': temperature, 'epsilon': epsilon.tolist(), 'E_f2': ef2,
                 'teacher': {'w': list(teacher.w), 'b': list(teacher.b)}},
    )


def claim4_report(n=100, beta=0.5, trials=2000, x_dist=None, seed=0, fit=OLS, tolerance=0.15):
    """Reporte de la verificación dura: razones dentro de 1 ± tolerance y unos doblando n."""
    report = verify_claim4(n, beta, trials, x_dist, seed, fit=fit, tolerance=tolerance)
    doubled = verify_claim4(2 * n, beta, trials, x_dist, seed + 1, fit=fit, tolerance=tolerance)
    halving = doubled.empirical_var['w'] / report.empirical_var['w']
    passed = report.ratio_within(1 - tolerance, 1 + tolerance) and abs(halving - 0.5) <= 0.5 * tolerance
    return ClaimReport(
        claim='claim4', passed=passed, trials=trials, n=n,
        predicted=report.predicted_var, empirical=report.empirical_var, ratio=report.ratio,
        details={'means': report.means, 'doubling_ratio_w': halving, 'fit': fit, 'beta': beta},
    )


def claim5_report(ns=(50, 200, 800), temperatures=(1.0, 5.0), trials=500, f_dist=None, seed=0,
                  teacher=None, confident=None, tolerance=0.2):
    """
    Dos comprobaciones blandas: escalado 1/n (cada ×4 en n reduce la varianza
    ≈4×) y varianza estrictamente decreciente al subir T con un profesor seguro.
    """
    by_n = [verify_claim5(n, 1.0, trials, f_dist, seed + i, teacher) for i, n in enumerate(ns)]
    scaling = []
    for small, large in zip(by_n, by_n[1:]):
        factor = large.n / small.n
        observed = small.empirical_var['b0'] / large.empirical_var['b0']
        scaling.append({'from': small.n, 'to': large.n, 'expected': factor, 'observed': observed})
    scaling_ok = all(abs(s['observed'] / s['expected'] - 1.0) <= tolerance for s in scaling)

    confident = confident or SoftmaxTeacher(w=(1.0, 0.0), b=(3.0, 0.0))
    by_t = [verify_claim5(ns[1], t, trials, f_dist, seed, confident) for t in temperatures]
    variances = [r.empirical_var['b0'] for r in by_t]
    monotone = all(later < earlier for earlier, later in zip(variances, variances[1:]))

    reference = by_n[len(by_n) // 2]
    return ClaimReport(
        claim='claim5', passed=scaling_ok and monotone, trials=trials, n=reference.n,
        predicted=reference.predicted_var, empirical=reference.empirical_var, ratio=reference.ratio,
        hard=False,
        details={
            'scaling': scaling, 'scaling_ok': scaling_ok,
            'temperatures': list(temperatures), 'variance_by_temperature': variances,
            'monotone_in_temperature': monotone,
            'excluded': {str(r.n): r.excluded for r in by_n},
        },
    )

