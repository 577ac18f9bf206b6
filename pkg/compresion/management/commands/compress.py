# compresion/management/commands/compress.py

from ...compress import FilterPruneSpec, drop_blocks, select_filters, shrink_filters
from ...errors import ConfigError, InvariantError
from ...experiments import (
    PRUNED_FILE, SCORES_FILE, build_dataset, curl_like_scores, derive_seed, drop_first_k,
    evaluation_set, finetune_config, flops_of_dropping, load_teacher, matched_filter_ratio,
    matched_latency_ratio, practise_config, record_scores, tiny_sets, write_json, write_table,
)
from ...network import count_flops, evaluate_classifier, save_checkpoint
from ...practise import (
    TAU_FLOOR, finetune, latency_ratio, measure_latency, practise_compress, recoverability_consistency,
)
from ._base import ExperimentCommand

TIMING_FILE = 'timing.json'
REPORT_FILE = 'report.json'
CONSISTENCY_FILE = 'consistency.csv'

CURL_CRITERIA = {'curl_like_l2': 'l2', 'curl_like_kl': 'kl'}


class Command(ExperimentCommand):
    help = 'Comprime el profesor con el método configurado y ajusta el modelo resultante'
    command_name = 'compress'

    def run_experiment(self, config, output_dir, run):
        teacher = load_teacher(config, output_dir)
        dataset = build_dataset(config)
        section = config['compression']
        method, k = section['method'], section['k']
        cfg = finetune_config(config)
        tiny = tiny_sets(config, dataset, labeled=config['tiny']['labeled'] or cfg.uses_labels)
        self.stdout.write(f'Método {method}, k={k}, ajuste {cfg.method} con {len(tiny)} muestras')

        metrics = {}
        if method == 'practise':
            pruned, report = practise_compress(teacher, k, tiny, practise_config(config))
            rows = [score.to_row() for score in report.scores]
            chosen, trace = report.chosen, report.finetune_trace
            document = report.to_dict()
            write_json(output_dir / REPORT_FILE, document)
            timing = document['timing']
            metrics['recoverability'] = document['deterministic']['recoverability']
            clamped = [row['block'] for row in rows if row['tau'] == TAU_FLOOR]
            if clamped and config['latency']['strict']:
                raise InvariantError(f'τ recortado en {", ".join(clamped)}: la medición de latencia no es fiable')
            if section['consistency']:
                metrics['consistency'] = self.consistency(config, output_dir, teacher, report, tiny, dataset)
        else:
            if method == 'filter_prune':
                rows, pruned, metrics = self.filter_baseline(config, teacher, k)
                chosen = []
            else:
                rows, chosen, pruned = self.block_baseline(method, teacher, k, tiny)
            trace = []
            if pruned.checksum() != teacher.checksum():
                pruned, trace = finetune(teacher, pruned, tiny, cfg, seed=derive_seed(config['seed'], 'finetune'))
            timing = self.measure(config, teacher, pruned)

        save_checkpoint(pruned, output_dir / PRUNED_FILE, extra={'method': method, 'chosen': [str(b) for b in chosen]})
        write_table(output_dir / SCORES_FILE, rows)
        if method != 'filter_prune':
            record_scores(run, rows, chosen)
        write_json(output_dir / TIMING_FILE, timing)

        evaluation = evaluation_set(dataset)
        teacher_metrics = evaluate_classifier(teacher, evaluation)
        pruned_metrics = evaluate_classifier(pruned, evaluation)
        self.stdout.write(self.style.SUCCESS(
            f'✓ Bloques eliminados: {", ".join(str(b) for b in chosen) or "-"}; '
            f'accuracy {teacher_metrics["accuracy"]:.4f} → {pruned_metrics["accuracy"]:.4f}'
        ))
        return {
            'method': method,
            'k': k,
            'finetune': cfg.method,
            'chosen': [str(b) for b in chosen],
            'teacher': teacher_metrics,
            'pruned': pruned_metrics,
            'flops_teacher': count_flops(teacher),
            'flops_pruned': count_flops(pruned),
            'finetune_final_loss': trace[-1] if trace else None,
            'teacher_checksum': teacher.checksum(),
            **metrics,
        }

    def block_baseline(self, method, teacher, k, tiny):
        """(filas de scores, bloques elegidos, modelo sin ajustar) para drop_first_k y curl_like_*."""
        first = drop_first_k(teacher, k)
        if method == 'drop_first_k':
            rows = [
                {'block': str(b), 'stage': b.stage, 'index': b.index, 'score': float(position)}
                for position, b in enumerate(teacher.active_blocks())
            ]
            return rows, first, drop_blocks(teacher, first)

        scores = curl_like_scores(teacher, tiny, CURL_CRITERIA[method])
        chosen = [block for _, block in scores[:k]]
        rows = [{'block': str(b), 'stage': b.stage, 'index': b.index, 'score': value} for value, b in scores]
        return rows, chosen, drop_blocks(teacher, sorted(chosen))

    def filter_baseline(self, config, teacher, k):
        """
        Poda de filtros física. Sin ratio explícito se usa el que iguala el
        ahorro de quitar los k primeros bloques, en FLOPs o en latencia medida
        según compression.match.
        """
        section = config['compression']
        ratio, matched = section['ratio'], {}
        if ratio is None:
            if k == 0:
                raise ConfigError("filter_prune necesita compression.ratio o k > 0")
            first = drop_first_k(teacher, k)
            if section['match'] == 'latency':
                latency = config['latency']
                ratio, target, achieved = matched_latency_ratio(
                    teacher, first, (latency['batch'], teacher.spec.input_dim), latency['trials'],
                    latency['warmup'], derive_seed(config['seed'], 'latency'),
                )
                matched = {'tau_target': target, 'tau_matched': achieved}
            else:
                ratio = matched_filter_ratio(teacher, flops_of_dropping(teacher, first))
        spec = FilterPruneSpec(ratio)
        widths = teacher.hidden
        rows = [
            {'block': str(b), 'stage': b.stage, 'index': b.index, 'width': widths[b], 'pruned_units': len(units)}
            for b, units in select_filters(teacher, spec).items()
        ]
        return rows, shrink_filters(teacher, spec), {'filter_ratio': ratio, **matched}

    def consistency(self, config, output_dir, teacher, report, tiny, dataset):
        """Ajusta cada eliminación individual y compara su error con el orden de los scores."""
        self.stdout.write(f'Consistencia: ajustando {len(report.scores)} eliminaciones individuales...')
        result = recoverability_consistency(
            teacher, report.scores, tiny, evaluation_set(dataset), finetune_config(config),
            seed=derive_seed(config['seed'], 'finetune'),
        )
        write_table(output_dir / CONSISTENCY_FILE, result['rows'])
        for name, rho in result['spearman'].items():
            self.stdout.write(f'  spearman {name}: {"-" if rho is None else f"{rho:.3f}"}')
        return result['spearman']

    def measure(self, config, teacher, pruned):
        section = config['latency']
        shape = (section['batch'], teacher.spec.input_dim)
        seed = derive_seed(config['seed'], 'latency')
        original = measure_latency(teacher, shape, section['trials'], section['warmup'], seed)
        compressed = measure_latency(pruned, shape, section['trials'], section['warmup'], seed)
        return {
            'latency_original': original.to_dict(),
            'latency_pruned': compressed.to_dict(),
            'tau': latency_ratio(original, compressed, clamp=False),
        }
