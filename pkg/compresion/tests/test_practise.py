# compresion/tests/test_practise.py
from dataclasses import replace

import numpy as np
from django.test import SimpleTestCase, tag

from .. import autodiff as ad
from ..compress import FilterPruneSpec, drop_block, drop_blocks, shrink_filters, zero_block
from ..data import sample_tiny
from ..errors import ConfigError, DatasetError, DimensionError
from ..experiments import (
    derive_seed, drop_first_k, evaluation_set, finetune_config, matched_latency_ratio, practise_config,
    tiny_sets,
)
from ..network import BlockId, ResNetSpec, build, evaluate_classifier, flatten, forward, train_teacher
from ..practise import (
    BP, FEATURE_MIMIC, KD, SCOPE_ADAPTORS, TAU_FLOOR, BlockScore, FinetuneConfig, LatencyStats,
    PractiseConfig, block_seed, feature_distance, finetune, fit_adaptors, latency_ratio, measure_latency,
    mimic_beta, practise_compress, pruning_score, rank_blocks, recoverability, recoverability_consistency,
    score_blocks,
)
from .helpers import BENCHMARK_SEEDS, benchmark, random_model, toy_dataset


def stats(mean_ms):
    return LatencyStats(mean_ms, 0.0, 500, 10, (64, 4))


def quick_config(**overrides):
    finetune_cfg = FinetuneConfig(iters=15, batch=16, lr=ad.LrSchedule(0.02, 15))
    values = {
        'adaptor_iters': 15, 'adaptor_lr': ad.LrSchedule(0.02, 15), 'adaptor_batch': 16,
        'latency_trials': 3, 'latency_warmup': 1, 'latency_batch': 8, 'finetune': finetune_cfg,
    }
    values.update(overrides)
    return PractiseConfig(**values)


class LatencyTests(SimpleTestCase):

    def test_latency_ratio_examples(self):
        self.assertAlmostEqual(latency_ratio(stats(41.7), stats(34.9)), 0.163, places=3)
        self.assertAlmostEqual(latency_ratio(100.0, 80.0), 0.2)
        self.assertEqual(latency_ratio(stats(10.0), stats(10.0), clamp=False), 0.0)

    def test_non_positive_ratio_is_clamped_with_warning(self):
        with self.assertLogs('compresion.practise.latency', level='WARNING'):
            self.assertEqual(latency_ratio(10.0, 12.0), TAU_FLOOR)
        with self.assertLogs('compresion.practise.latency', level='WARNING'):
            self.assertAlmostEqual(latency_ratio(10.0, 12.0, clamp=False), -0.2)

    def test_latency_ratio_requires_positive_means(self):
        with self.assertRaises(ValueError):
            latency_ratio(0.0, 1.0)

    def test_single_trial_has_zero_std(self):
        result = measure_latency(random_model(), trials=1, warmup=0)
        self.assertEqual(result.std_ms, 0.0)
        self.assertGreater(result.mean_ms, 0.0)
        self.assertEqual(result.input_shape, (64, 4))
        self.assertFalse(result.reportable)

    def test_trials_must_be_positive(self):
        with self.assertRaises(ValueError):
            measure_latency(random_model(), trials=0)


class ScoreTests(SimpleTestCase):

    def test_pruning_score_examples(self):
        self.assertEqual(pruning_score(0.0, 0.3), 0.0)
        self.assertEqual(pruning_score(0.5, 0.25), 2.0)
        self.assertLess(pruning_score(0.5, 0.4), pruning_score(0.5, 0.2))
        with self.assertRaises(ValueError):
            pruning_score(0.5, 0.0)

    def test_rank_breaks_ties_by_block(self):
        scores = [
            BlockScore(BlockId(1, 0), 0.5, 0.25, 2.0),
            BlockScore(BlockId(0, 1), 0.5, 0.25, 2.0),
            BlockScore(BlockId(0, 0), 0.1, 0.5, 0.2),
        ]
        self.assertEqual([s.block for s in rank_blocks(scores)], [BlockId(0, 0), BlockId(0, 1), BlockId(1, 0)])

    def test_block_score_validation(self):
        with self.assertRaises(ValueError):
            BlockScore(BlockId(0, 0), 0.5, 1.5, 0.5 / 1.5)
        with self.assertRaises(ValueError):
            BlockScore(BlockId(0, 0), 0.5, 0.25, 1.0)


class RecoverabilityTests(SimpleTestCase):

    def setUp(self):
        self.dataset = toy_dataset()
        self.tiny = sample_tiny(self.dataset, 30, seed=0)
        self.teacher = random_model(seed=2, input_dim=self.dataset.dim)

    def test_identity_block_is_free_to_drop(self):
        block = BlockId(0, 1)
        teacher = zero_block(self.teacher, block)
        self.assertLess(recoverability(teacher, block, self.tiny, adaptor_iters=10), 1e-8)

    def test_training_never_beats_the_identity_minimum_upwards(self):
        block = BlockId(1, 0)
        untrained = recoverability(self.teacher, block, self.tiny, adaptor_iters=0)
        trained = recoverability(self.teacher, block, self.tiny, adaptor_iters=40, batch=10, seed=1)
        self.assertLessEqual(trained, untrained)

    def test_zero_iterations_is_the_identity_distance(self):
        block = BlockId(1, 0)
        target = forward(self.teacher, self.tiny.X)[0]
        untrained = recoverability(self.teacher, block, self.tiny, adaptor_iters=0)
        direct = feature_distance(drop_block(self.teacher, block), self.tiny.X, target)
        self.assertAlmostEqual(untrained, direct, places=12)

    def test_mimic_beta_normalises_feature_energy(self):
        target = np.full((4, 5), 20.0)
        self.assertEqual(mimic_beta(target), 1 / 400)
        self.assertEqual(mimic_beta(np.zeros((4, 5))), 1.0)
        self.assertEqual(mimic_beta(np.zeros((0, 5))), 1.0)

    def test_recovery_fuses_to_the_pruned_architecture(self):
        block = BlockId(0, 0)
        recovery = fit_adaptors(self.teacher, block, self.tiny, adaptor_iters=20, batch=10)
        fused = recovery.fused()
        self.assertEqual(fused.dropped, {block})
        adapted = forward(recovery.pruned, self.tiny.X, recovery.adaptors)[0]
        np.testing.assert_allclose(forward(fused, self.tiny.X)[0], adapted, rtol=0, atol=1e-9)

    def test_empty_tiny_set(self):
        with self.assertRaises(DatasetError):
            recoverability(self.teacher, BlockId(0, 0), self.tiny.subset([]))

    def test_scores_do_not_depend_on_enumeration_order(self):
        cfg = quick_config()
        target = forward(self.teacher, self.tiny.X)[0]
        scores, _ = score_blocks(self.teacher, target, self.tiny, cfg)
        for score in reversed(scores):
            alone = recoverability(
                self.teacher, score.block, self.tiny, cfg.radius, cfg.adaptor_iters, cfg.adaptor_lr,
                cfg.adaptor_batch, block_seed(cfg.seed, score.block),
            )
            self.assertEqual(alone, score.recoverability)


class FinetuneTests(SimpleTestCase):

    def setUp(self):
        self.dataset = toy_dataset()
        self.teacher = random_model(seed=3, input_dim=self.dataset.dim)
        self.tiny = sample_tiny(self.dataset, 30, seed=1, labeled=True)

    def test_feature_mimic_on_the_teacher_itself_changes_nothing(self):
        cfg = FinetuneConfig(iters=10, batch=10, lr=ad.LrSchedule(0.1, 10))
        student, trace = finetune(self.teacher, self.teacher.clone(), self.tiny.unlabeled(), cfg)
        self.assertEqual(trace[0], 0.0)
        self.assertEqual(student.checksum(), self.teacher.checksum())

    def test_feature_mimic_keeps_the_teacher_head(self):
        student = drop_block(self.teacher, BlockId(0, 0))
        for name in student.head_param_names():
            student.params[name] = np.zeros_like(student.params[name])
        cfg = FinetuneConfig(iters=10, batch=10, lr=ad.LrSchedule(0.05, 10))
        finetuned, _ = finetune(self.teacher, student, self.tiny.unlabeled(), cfg)
        for name in finetuned.head_param_names():
            np.testing.assert_array_equal(finetuned.params[name], self.teacher.params[name])

    def test_kd_with_hard_targets_is_bp(self):
        logits = np.random.default_rng(0).standard_normal((5, 3))
        labels = np.array([0, 2, 1, 1, 0])
        one_hot = np.eye(3)[labels]
        self.assertEqual(ad.softmax_ce(logits, one_hot, 1.0).item(), ad.softmax_ce(logits, labels).item())

    def test_every_method_runs(self):
        student = drop_block(self.teacher, BlockId(1, 1))
        for method in (BP, KD, FEATURE_MIMIC):
            cfg = FinetuneConfig(method=method, iters=5, batch=10, lr=ad.LrSchedule(0.02, 5))
            finetuned, trace = finetune(self.teacher, student, self.tiny, cfg, seed=2)
            self.assertEqual(len(trace), 5)
            self.assertEqual(flatten(finetuned).layout, flatten(student).layout)

    def test_bp_needs_labels(self):
        student = drop_block(self.teacher, BlockId(0, 0))
        cfg = FinetuneConfig(method=BP, iters=2, batch=10, lr=ad.LrSchedule(0.02, 2))
        with self.assertRaises(DatasetError):
            finetune(self.teacher, student, self.tiny.unlabeled(), cfg)

    def test_adaptor_scope_fuses_back(self):
        student = drop_blocks(self.teacher, [BlockId(0, 0), BlockId(1, 1)])
        cfg = FinetuneConfig(iters=10, batch=10, lr=ad.LrSchedule(0.02, 10), scope=SCOPE_ADAPTORS)
        finetuned, trace = finetune(self.teacher, student, self.tiny.unlabeled(), cfg)
        self.assertEqual(len(trace), 10)
        self.assertEqual(flatten(finetuned).layout, flatten(student).layout)

    def test_student_must_come_from_the_teacher(self):
        other = build(ResNetSpec(self.dataset.dim, ((5, 1),), 3))
        with self.assertRaises(DimensionError):
            finetune(self.teacher, other, self.tiny, FinetuneConfig(iters=1))

    def test_config_validation(self):
        with self.assertRaises(ConfigError):
            FinetuneConfig(method='sgd')
        with self.assertRaises(ConfigError):
            FinetuneConfig(method=BP, scope=SCOPE_ADAPTORS)
        with self.assertRaises(ConfigError):
            FinetuneConfig(temperature=0.0)
        with self.assertRaises(ConfigError):
            PractiseConfig(finetune=FinetuneConfig(method=KD))


class PipelineTests(SimpleTestCase):

    def setUp(self):
        self.dataset = toy_dataset()
        self.teacher = random_model(seed=5, input_dim=self.dataset.dim)
        self.tiny = sample_tiny(self.dataset, 30, seed=2)

    def test_k_zero_returns_the_teacher(self):
        pruned, report = practise_compress(self.teacher, 0, self.tiny, quick_config())
        self.assertIsNot(pruned, self.teacher)
        self.assertEqual(pruned.checksum(), self.teacher.checksum())
        self.assertEqual(len(report.scores), 4)
        self.assertEqual(report.chosen, [])
        self.assertEqual(report.finetune_trace, [])

    def test_k_one_drops_the_lowest_score(self):
        pruned, report = practise_compress(self.teacher, 1, self.tiny, quick_config())
        best = rank_blocks(report.scores)[0].block
        self.assertEqual(report.chosen, [best])
        self.assertEqual(pruned.dropped, {best})
        document = report.to_dict()
        self.assertEqual(document['chosen'], [str(best)])
        self.assertEqual(set(document['deterministic']['recoverability']), {str(s.block) for s in report.scores})

    def test_greedy_rescoring_records_rounds(self):
        pruned, report = practise_compress(self.teacher, 2, self.tiny, quick_config(greedy=True))
        self.assertEqual(len(report.rounds), 2)
        self.assertEqual(len(report.rounds[1]), 3)
        self.assertEqual(pruned.dropped, set(report.chosen))

    def test_k_out_of_range(self):
        with self.assertRaises(ConfigError):
            practise_compress(self.teacher, 5, self.tiny, quick_config())

    def test_compression_never_reads_labels(self):
        self.assertIsNone(self.tiny.y)
        _, report = practise_compress(self.teacher, 1, self.tiny, quick_config())
        self.assertEqual(len(report.chosen), 1)

    def test_consistency_finetunes_every_single_drop(self):
        cfg = quick_config()
        _, report = practise_compress(self.teacher, 0, self.tiny, cfg)
        result = recoverability_consistency(self.teacher, report.scores, self.tiny, self.dataset.heldout(), cfg.finetune)
        self.assertEqual([row['block'] for row in result['rows']], [str(s.block) for s in report.scores])
        self.assertEqual(
            set(result['spearman']),
            {'recoverability_vs_error', 'recoverability_vs_loss', 'score_vs_error', 'score_vs_loss'},
        )
        for rho in result['spearman'].values():
            self.assertTrue(rho is None or -1.0 <= rho <= 1.0)

    @tag('slow')
    def test_recoverability_ranks_blocks_like_brute_force_finetuning(self):
        dataset = toy_dataset(seed=0, K=4, d=8, n_per_class=250, heldout_per_class=250, class_sep=2.5)
        spec = ResNetSpec(dataset.dim, ((16, 4), (12, 3)), dataset.num_classes, seed=0)
        teacher, _ = train_teacher(build(spec), dataset, 2000, ad.LrSchedule(0.05), 64, seed=0)
        tiny = sample_tiny(dataset, 50, seed=0)
        finetune_cfg = FinetuneConfig(iters=500, batch=50, lr=ad.LrSchedule(0.02, 500))
        cfg = quick_config(adaptor_iters=500, adaptor_lr=ad.LrSchedule(0.02, 500), adaptor_batch=50,
                           latency_trials=100, latency_warmup=10, latency_batch=64, finetune=finetune_cfg)
        scores, _ = score_blocks(teacher, forward(teacher, tiny.X)[0], tiny, cfg)
        result = recoverability_consistency(teacher, scores, tiny, dataset.heldout(), finetune_cfg)
        self.assertGreaterEqual(result['spearman']['score_vs_error'], 0.7)


class BenchmarkTests(SimpleTestCase):
    """Configuración por defecto sobre las semillas de referencia."""

    def setup_seed(self, seed):
        config, dataset, teacher = benchmark(seed)
        tiny = tiny_sets(config, dataset, labeled=True)
        return config, dataset, teacher, tiny

    def tuned_accuracy(self, config, dataset, teacher, student, tiny, method=FEATURE_MIMIC):
        cfg = replace(finetune_config(config), method=method)
        tuned, trace = finetune(teacher, student, tiny, cfg, seed=derive_seed(config['seed'], 'finetune'))
        self.assertTrue(np.all(np.isfinite(trace)))
        return evaluate_classifier(tuned, evaluation_set(dataset))['accuracy']

    @tag('slow')
    def test_feature_mimic_is_stable_with_the_default_schedule(self):
        for seed in range(3):
            config, _, teacher, tiny = self.setup_seed(seed)
            cfg = practise_config(config)
            target = forward(teacher, tiny.X)[0]
            for block in teacher.active_blocks():
                recovery = fit_adaptors(
                    teacher, block, tiny, cfg.radius, cfg.adaptor_iters, cfg.adaptor_lr, cfg.adaptor_batch,
                    block_seed(cfg.seed, block), target,
                )
                self.assertTrue(np.isfinite(recovery.recoverability))
                self.assertTrue(np.all(np.isfinite(recovery.trace)))
            student = drop_blocks(teacher, drop_first_k(teacher, 3))
            _, trace = finetune(teacher, student, tiny.unlabeled(), cfg.finetune, seed=seed)
            self.assertTrue(np.all(np.isfinite(trace)))
            self.assertLess(trace[-1], trace[0])

    @tag('slow')
    def test_speedup_is_positive_and_grows_with_dropped_blocks(self):
        config, _, teacher, _ = self.setup_seed(0)
        shape = (config['latency']['batch'], teacher.spec.input_dim)
        trials, warmup = config['latency']['trials'], config['latency']['warmup']
        base = measure_latency(teacher, shape, trials, warmup)
        singles = [
            latency_ratio(base, measure_latency(drop_block(teacher, block), shape, trials, warmup), clamp=False)
            for block in teacher.active_blocks()
        ]
        for tau in singles:
            self.assertGreater(tau, 0.0)
        first = drop_first_k(teacher, 3)
        pruned = measure_latency(drop_blocks(teacher, first), shape, trials, warmup)
        combined = latency_ratio(base, pruned, clamp=False)
        self.assertGreaterEqual(combined, max(singles))

    @tag('slow')
    def test_feature_mimic_beats_kd_beats_bp(self):
        ordered = 0
        for seed in BENCHMARK_SEEDS:
            config, dataset, teacher, tiny = self.setup_seed(seed)
            student = drop_blocks(teacher, drop_first_k(teacher, 3))
            accuracy = {
                method: self.tuned_accuracy(config, dataset, teacher, student, tiny, method)
                for method in (FEATURE_MIMIC, KD, BP)
            }
            ordered += accuracy[FEATURE_MIMIC] > accuracy[KD] > accuracy[BP]
        self.assertGreaterEqual(ordered, 4)

    @tag('slow')
    def test_scored_drops_beat_first_blocks_and_filter_pruning(self):
        ordered = 0
        for seed in BENCHMARK_SEEDS:
            config, dataset, teacher, tiny = self.setup_seed(seed)
            compressed, _ = practise_compress(teacher, 3, tiny.unlabeled(), practise_config(config))
            scored = evaluate_classifier(compressed, evaluation_set(dataset))['accuracy']

            first = drop_first_k(teacher, 3)
            first_blocks = self.tuned_accuracy(config, dataset, teacher, drop_blocks(teacher, first), tiny)
            latency = config['latency']
            ratio, _, _ = matched_latency_ratio(
                teacher, first, (latency['batch'], teacher.spec.input_dim), latency['trials'], latency['warmup'],
            )
            filters = self.tuned_accuracy(
                config, dataset, teacher, shrink_filters(teacher, FilterPruneSpec(ratio)), tiny,
            )
            ordered += scored >= first_blocks >= filters
        self.assertGreaterEqual(ordered, 4)
