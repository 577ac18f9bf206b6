# compresion/tests/test_theory.py
import numpy as np
from django.test import SimpleTestCase, tag
from scipy.stats import norm

from ..theory import (
    ClaimReport, DiscreteJoint, claim4_report, claim5_report, compare_stability, confident_teacher,
    decompose_kl, fit_ols, fit_softmax_newton, gaussian_constant, gaussian_nll_residual, kl_joint,
    kl_marginal_y, random_joint, sensitivity, SoftmaxTeacher, stability_threshold, verify_claim1, verify_claim2,
    verify_claim4, verify_claim5, verify_gaussian_mse,
)
from ..theory.variance import fit_sgd


def independent(py, pf):
    return DiscreteJoint(np.outer(py, pf))


class DiscreteTests(SimpleTestCase):

    def test_identical_joints_have_zero_divergence(self):
        p = random_joint(np.random.default_rng(0), (3, 4))
        self.assertEqual(kl_joint(p, p), 0.0)
        self.assertEqual(kl_marginal_y(p, p), 0.0)

    def test_same_label_marginal_only_joint_differs(self):
        py = np.array([0.2, 0.3, 0.5])
        p = independent(py, [0.1, 0.2, 0.3, 0.4])
        q = independent(py, [0.25, 0.25, 0.25, 0.25])
        self.assertAlmostEqual(kl_marginal_y(p, q), 0.0, places=12)
        self.assertGreater(kl_joint(p, q), 0.0)

    def test_joint_validation(self):
        with self.assertRaises(ValueError):
            DiscreteJoint([[0.5, 0.5], [0.0, 0.0]])
        with self.assertRaises(ValueError):
            DiscreteJoint([[0.3, 0.3], [0.3, 0.3]])
        with self.assertRaises(ValueError):
            DiscreteJoint([0.5, 0.5])

    def test_marginal_bound_holds(self):
        report = verify_claim1(trials=1000)
        self.assertTrue(report.passed)
        self.assertEqual(report.details['violations'], 0)
        self.assertGreaterEqual(report.details['min_margin'], -1e-12)

    def test_decomposition_identity(self):
        report = verify_claim2(trials=200)
        self.assertTrue(report.passed)
        self.assertLess(report.details['max_identity_error'], 1e-10)

    def test_label_independent_of_feature_has_no_classification_term(self):
        py = np.array([0.6, 0.4])
        p = independent(py, [0.1, 0.6, 0.3])
        q = independent(py, [0.3, 0.3, 0.4])
        mimic, classification, constant = decompose_kl(p, q)
        self.assertAlmostEqual(classification, 0.0, places=12)
        self.assertAlmostEqual(mimic + classification + constant, kl_joint(p, q), places=12)


class GaussianTests(SimpleTestCase):

    def test_residual_at_the_mean_is_the_constant(self):
        self.assertAlmostEqual(float(gaussian_nll_residual(0.3, 0.3, 0.5)), gaussian_constant(0.5), places=12)

    def test_quadratic_part(self):
        quadratic = -norm.logpdf(2.0, loc=0.0, scale=1.0) - gaussian_constant(0.5)
        self.assertAlmostEqual(quadratic, 2.0, places=12)

    def test_verify_gaussian_mse(self):
        report = verify_gaussian_mse()
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.empirical, report.predicted, places=10)
        with self.assertRaises(ValueError):
            verify_gaussian_mse(beta=0.0)


class MimicVarianceTests(SimpleTestCase):

    def test_ols_recovers_a_line(self):
        x = np.linspace(-1.0, 1.0, 11)
        w, b = fit_ols(x, 2.0 * x - 0.5)
        self.assertAlmostEqual(w, 2.0, places=10)
        self.assertAlmostEqual(b, -0.5, places=10)

    def test_ols_singular_design(self):
        self.assertIsNone(fit_ols(np.ones(5), np.arange(5.0)))

    def test_sgd_agrees_with_ols(self):
        rng = np.random.default_rng(1)
        x = rng.standard_normal(100)
        f = 1.0 * x + 0.5 + rng.normal(0.0, 1.0, 100)
        np.testing.assert_allclose(fit_sgd(x, f, 0.5), fit_ols(x, f), atol=1e-3)

    def test_argument_validation(self):
        with self.assertRaises(ValueError):
            verify_claim4(n=5)
        with self.assertRaises(ValueError):
            verify_claim4(trials=100)
        with self.assertRaises(ValueError):
            verify_claim4(fit='adam')

    def test_variance_matches_prediction(self):
        report = verify_claim4(n=100, beta=0.5, trials=2000)
        self.assertAlmostEqual(report.predicted_var['w'], 1.0 / 100)
        self.assertTrue(report.ratio_within(0.85, 1.15))
        standard_error = np.sqrt(report.empirical_var['w'] / 2000)
        self.assertLess(abs(report.means['w'] - 1.0), 4 * standard_error)

    @tag('slow')
    def test_claim4_report_with_doubling(self):
        report = claim4_report()
        self.assertTrue(report.passed)
        self.assertAlmostEqual(report.details['doubling_ratio_w'], 0.5, delta=0.075)


class ClassificationVarianceTests(SimpleTestCase):

    def test_teacher_validation(self):
        with self.assertRaises(ValueError):
            SoftmaxTeacher(w=(1.0,), b=(0.0,))
        for epsilon in (0.0, 0.3):
            with self.assertRaises(ValueError):
                confident_teacher(epsilon)
        with self.assertRaises(ValueError):
            verify_claim5(temperature=0.0)

    def test_confident_teacher_sensitivity(self):
        epsilon = sensitivity(confident_teacher(0.01), norm(0.0, 1.0), 1.0, samples=1000)
        np.testing.assert_allclose(epsilon, [0.01, 0.01], rtol=1e-9)

    def test_newton_recovers_teacher(self):
        teacher = SoftmaxTeacher(w=(0.5, 0.0), b=(0.2, 0.0))
        rng = np.random.default_rng(0)
        f = rng.standard_normal(20000)
        q = teacher.probabilities(f)
        y = (q.cumsum(axis=1) > rng.random(f.size)[:, None]).argmax(axis=1)
        w, b, converged = fit_softmax_newton(f, y, 0.0, 0.0, np.zeros(1), np.zeros(1))
        self.assertTrue(converged)
        self.assertAlmostEqual(w[0], 0.5, delta=0.06)
        self.assertAlmostEqual(b[0], 0.2, delta=0.06)

    def test_separated_labels_do_not_converge(self):
        f = np.array([-0.02, -0.01, 0.01, 0.02])
        y = np.array([1, 1, 0, 0])
        _, _, converged = fit_softmax_newton(f, y, 0.0, 0.0, np.zeros(1), np.zeros(1))
        self.assertFalse(converged)

    @tag('slow')
    def test_symmetric_teacher_variance(self):
        report = verify_claim5(n=200, trials=500, teacher=confident_teacher(0.25))
        self.assertTrue(report.ratio_within(0.7, 1.4))

    @tag('slow')
    def test_temperature_reduces_variance_for_confident_teacher(self):
        teacher = SoftmaxTeacher(w=(1.0, 0.0), b=(3.0, 0.0))
        cold = verify_claim5(n=200, temperature=1.0, trials=500, teacher=teacher)
        warm = verify_claim5(n=200, temperature=5.0, trials=500, teacher=teacher)
        self.assertLess(warm.empirical_var['b0'], cold.empirical_var['b0'])

    @tag('slow')
    def test_claim5_variance_scales_as_one_over_n(self):
        report = claim5_report(ns=(50, 200, 800), trials=2000)
        self.assertEqual([(s['from'], s['to']) for s in report.details['scaling']], [(50, 200), (200, 800)])
        for step in report.details['scaling']:
            self.assertEqual(step['expected'], 4.0)
            self.assertAlmostEqual(step['observed'] / step['expected'], 1.0, delta=0.2)
        self.assertTrue(report.details['scaling_ok'])


class StabilityTests(SimpleTestCase):

    def test_threshold(self):
        self.assertAlmostEqual(stability_threshold(0.5, norm(0.0, 1.0), norm(0.0, 1.0)), 1.0)
        self.assertAlmostEqual(stability_threshold(0.5, norm(0.0, 2.0), norm(0.0, 1.0)), 4.0)

    @tag('slow')
    def test_feature_mimic_is_more_stable_with_confident_teacher(self):
        report = compare_stability()
        self.assertTrue(report.details['feature_mimic_more_stable_predicted'])
        self.assertTrue(report.details['feature_mimic_more_stable_observed'])
        self.assertTrue(report.passed)


class ReportTests(SimpleTestCase):

    def test_to_dict_replaces_non_finite_values(self):
        report = ClaimReport(
            claim='x', passed=True, trials=10, empirical={'w': float('inf')}, ratio=[float('nan'), 1.0],
        )
        data = report.to_dict()
        self.assertEqual(data['empirical'], {'w': None})
        self.assertEqual(data['ratio'], [None, 1.0])
        self.assertIs(data['pass'], True)
