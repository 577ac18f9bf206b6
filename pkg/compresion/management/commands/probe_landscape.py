# compresion/management/commands/probe_landscape.py

from ...compress import FilterPruneSpec, drop_block, prune_filters, shrink_filters, zero_block
from ...errors import ConfigError, InvalidBlockError
from ...experiments import (
    build_dataset, build_spec, derive_seed, evaluation_set, finetune_config, flops_of_dropping,
    load_teacher, matched_filter_ratio, schedule, tiny_sets,
)
from ...landscape import (
    CROSS_ENTROPY, convexity_gap, default_lambdas, diagnostics_table, loss_curve, loss_leakage, write_curve,
)
from ...network import BlockId, build, count_flops, evaluate_classifier, flatten, train_teacher
from ...practise import finetune
from ._base import ExperimentCommand

CURVES_DIR = 'curves'
DIAGNOSTICS_FILE = 'diagnostics.csv'


class Command(ExperimentCommand):
    help = 'Interpola linealmente entre pares de modelos y mide convexidad y fuga de pérdida'
    command_name = 'probe_landscape'

    def run_experiment(self, config, output_dir, run):
        teacher = load_teacher(config, output_dir)
        dataset = build_dataset(config)
        evaluation = evaluation_set(dataset)
        section = config['landscape']
        lambdas = default_lambdas(section['points'])
        block = self.probe_block(teacher, section['block'])

        def curve(model_a, model_b, **meta):
            return loss_curve(
                model_a.spec, model_a.dropped, flatten(model_a), flatten(model_b), evaluation,
                CROSS_ENTROPY, lambdas, endpoints_meta=meta,
            )

        curves = {}
        metrics = {'block': str(block), 'points': section['points'], 'n_eval': len(evaluation)}
        pairs = section['pairs']

        if 'raw_block_zeroed' in pairs:
            curves['raw_block_zeroed'] = curve(teacher, zero_block(teacher, block), a='raw', b=f'zeroed {block}')

        if 'raw_filter_zeroed' in pairs:
            target = flops_of_dropping(teacher, [block])
            ratio = config['compression']['ratio'] or matched_filter_ratio(teacher, target)
            spec = FilterPruneSpec(ratio)
            reduction = count_flops(teacher) - count_flops(shrink_filters(teacher, spec))
            curves['raw_filter_zeroed'] = curve(
                teacher, prune_filters(teacher, spec), a='raw', b=f'filters zeroed (ratio={ratio:.6g})',
            )
            metrics['filter_pruning'] = {
                'ratio': ratio, 'flops_reduction': reduction, 'block_flops_reduction': target,
            }

        if {'pruned_finetuned', 'finetune_a_b'} & set(pairs):
            cfg = finetune_config(config)
            labeled = config['tiny']['labeled'] or cfg.uses_labels
            seed = derive_seed(config['seed'], 'finetune')
            student = drop_block(teacher, block)

            if 'pruned_finetuned' in pairs:
                tiny = tiny_sets(config, dataset, labeled=labeled)
                finetuned, _ = finetune(teacher, student, tiny, cfg, seed=seed)
                curves['pruned_finetuned'] = curve(student, finetuned, a=f'pruned {block}', b='finetuned')

            if 'finetune_a_b' in pairs:
                set_a, set_b = tiny_sets(config, dataset, pair=True, labeled=labeled)
                model_a, _ = finetune(teacher, student, set_a, cfg, seed=seed)
                model_b, _ = finetune(teacher, student, set_b, cfg, seed=seed)
                curves['finetune_a_b'] = curve(model_a, model_b, a='finetuned on A', b='finetuned on B')
                if section['data_thirst']:
                    model_union, _ = finetune(teacher, student, set_a.union(set_b), cfg, seed=seed)
                    metrics['data_thirst'] = self.data_thirst(
                        model_a, model_b, model_union, evaluation, curves['finetune_a_b'],
                    )

        if section['scratch_pair']:
            curves['scratch_pair'] = self.scratch_pair(config, dataset, curve)

        curves_dir = output_dir / CURVES_DIR
        for name, probe in curves.items():
            write_curve(probe, curves_dir / f'{name}.csv')
            self.stdout.write(f'  {name}: convexity_gap={convexity_gap(probe):.6g}')
        table = diagnostics_table(curves)
        table.to_csv(output_dir / DIAGNOSTICS_FILE, index=False, float_format='%.17g')

        metrics['diagnostics'] = {row.pop('pair'): row for row in table.to_dict(orient='records')}
        self.stdout.write(self.style.SUCCESS(f'✓ {len(curves)} curvas escritas en {curves_dir}'))
        return metrics

    def probe_block(self, teacher, value):
        """Bloque de la configuración, o el primero eliminable si no se indica."""
        if not value:
            blocks = teacher.active_blocks()
            if not blocks:
                raise ConfigError('El profesor no tiene bloques eliminables que sondear')
            return blocks[0]
        try:
            return teacher.check_droppable(BlockId.parse(value))
        except InvalidBlockError as exc:
            raise ConfigError(f'landscape.block: {exc}') from None

    def data_thirst(self, model_a, model_b, model_union, evaluation, probe):
        """
        Pérdida de validación de cada extremo frente al modelo afinado con A∪B,
        junto a la fuga de la curva A↔B. La proporcionalidad se reporta, no se exige.
        """
        loss_a = evaluate_classifier(model_a, evaluation)['loss']
        loss_b = evaluate_classifier(model_b, evaluation)['loss']
        loss_union = evaluate_classifier(model_union, evaluation)['loss']
        leakage = loss_leakage(probe)
        return {
            'loss_a': loss_a,
            'loss_b': loss_b,
            'loss_union': loss_union,
            'loss_mid': probe.midpoint_loss(),
            'thirst_a': loss_a - loss_union,
            'thirst_b': loss_b - loss_union,
            'leakage': leakage.clamped,
            'leakage_raw': leakage.raw,
        }

    def scratch_pair(self, config, dataset, curve):
        """Dos profesores entrenados desde cero con semillas distintas."""
        section = config['teacher']
        models = []
        for label in ('scratch_a', 'scratch_b'):
            spec = build_spec(config, dataset, label=f'network {label}')
            model, _ = train_teacher(
                build(spec), dataset, section['iters'], schedule(section['lr'], section['iters']),
                section['batch'], derive_seed(config['seed'], f'teacher {label}'),
            )
            models.append(model)
        return curve(models[0], models[1], a='scratch seed A', b='scratch seed B')
