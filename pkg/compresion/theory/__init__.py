from .reports import ClaimReport
from .discrete import (
    DiscreteJoint, decompose_kl, kl, kl_joint, kl_marginal_y, random_joint, verify_claim1, verify_claim2,
)
from .gaussian import gaussian_constant, gaussian_nll_residual, verify_gaussian_mse
from .variance import (
    DEFAULT_TEACHER, OLS, SGD, SoftmaxTeacher, VarianceReport, claim4_report, claim5_report,
    confident_teacher, fit_ols, fit_softmax_newton, second_moment, sensitivity, verify_claim4,
    verify_claim5,
)
from .stability import compare_stability, stability_threshold

__all__ = [
    'ClaimReport', 'DiscreteJoint', 'decompose_kl', 'kl', 'kl_joint', 'kl_marginal_y',
    'random_joint', 'verify_claim1', 'verify_claim2', 'gaussian_constant',
    'gaussian_nll_residual', 'verify_gaussian_mse', 'DEFAULT_TEACHER', 'OLS', 'SGD',
    'SoftmaxTeacher', 'VarianceReport', 'claim4_report', 'claim5_report', 'confident_teacher',
    'fit_ols', 'fit_softmax_newton', 'second_moment', 'sensitivity', 'verify_claim4',
    'verify_claim5', 'compare_stability', 'stability_threshold',
]
