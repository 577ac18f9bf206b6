# compresion/theory/stability.py
from scipy.stats import norm

from .reports import ClaimReport
from .variance import confident_teacher, second_moment, verify_claim4, verify_claim5


def stability_threshold(beta, x_dist, f_dist):
    """La imitación de features es más estable mientras ε < 2β·E[x²]/E[f²]."""
    return 2.0 * beta * second_moment(x_dist) / second_moment(f_dist)


def compare_stability(n=50, beta=0.5, teacher_confidence=1e-3, trials=500, seed=0, x_dist=None):
    """
    Ajusta ambos estimadores con el mismo n y la misma distribución de
    features, y compara sus varianzas. Si la predicción dice que la imitación
    es más estable, se exige que lo sea también empíricamente; si no, se
    reporta la inversión tal cual.
    """
    x_dist = x_dist or norm(0.0, 1.0)
    mimic = verify_claim4(n, beta, trials, x_dist, seed)
    classification = verify_claim5(n, 1.0, trials, x_dist, seed, confident_teacher(teacher_confidence))

    pairs = {'w': 'w0', 'b': 'b0'}
    predicted_ratio = {
        k: mimic.predicted_var[k] / classification.predicted_var[v] for k, v in pairs.items()
    }
    empirical_ratio = {
        k: mimic.empirical_var[k] / classification.empirical_var[v] for k, v in pairs.items()
    }
    threshold = stability_threshold(beta, x_dist, x_dist)
    expected = teacher_confidence < threshold
    observed = all(r < 1.0 for r in empirical_ratio.values())
    return ClaimReport(
        claim='stability', passed=observed if expected else True, trials=trials, n=n,
        predicted=predicted_ratio, empirical=empirical_ratio, hard=False,
        details={
            'epsilon': teacher_confidence, 'beta': beta, 'threshold': threshold,
            'feature_mimic_more_stable_predicted': expected,
            'feature_mimic_more_stable_observed': observed,
            'feature_mimic': mimic.to_dict(), 'classification': classification.to_dict(),
        },
    )
