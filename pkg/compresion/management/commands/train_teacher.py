# compresion/management/commands/train_teacher.py

from ...data import write_csv
from ...experiments import (
    TEACHER_FILE, build_dataset, build_spec, derive_seed, evaluation_set, schedule,
)
from ...network import build, count_flops, evaluate_classifier, save_checkpoint, train_teacher
from ._base import ExperimentCommand

DATASET_FILE = 'data/dataset.csv'


class Command(ExperimentCommand):
    help = 'Genera los datos, entrena el modelo profesor y guarda checkpoint y métricas'
    command_name = 'train_teacher'

    def run_experiment(self, config, output_dir, run):
        dataset = build_dataset(config)
        spec = build_spec(config, dataset)
        self.stdout.write(
            f'Datos: {len(dataset.train())} de entrenamiento, {len(dataset.heldout())} de validación, '
            f'd={dataset.dim}, K={dataset.num_classes}'
        )

        section = config['teacher']
        teacher, trace = train_teacher(
            build(spec), dataset, section['iters'], schedule(section['lr'], section['iters']),
            section['batch'], derive_seed(config['seed'], 'teacher'),
        )

        save_checkpoint(teacher, output_dir / TEACHER_FILE, extra={'seed': config['seed']})
        if not config['dataset']['csv']:
            write_csv(dataset, output_dir / DATASET_FILE)

        train_metrics = evaluate_classifier(teacher, dataset.train())
        heldout_metrics = evaluate_classifier(teacher, evaluation_set(dataset))
        self.stdout.write(self.style.SUCCESS(
            f'✓ Profesor entrenado: accuracy de validación {heldout_metrics["accuracy"]:.4f}'
        ))
        return {
            'train': train_metrics,
            'heldout': heldout_metrics,
            'final_loss': trace[-1] if trace else None,
            'flops': count_flops(teacher),
            'n_params': sum(value.size for value in teacher.params.values()),
            'droppable_blocks': len(teacher.active_blocks()),
            'teacher_checksum': teacher.checksum(),
        }
