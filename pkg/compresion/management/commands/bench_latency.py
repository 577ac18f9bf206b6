# compresion/management/commands/bench_latency.py

from ...compress import drop_block
from ...errors import InvariantError
from ...experiments import PRUNED_FILE, derive_seed, load_teacher, write_table
from ...network import count_flops, load_checkpoint
from ...practise import latency_ratio, measure_latency
from ._base import ExperimentCommand

LATENCY_FILE = 'latency.csv'


class Command(ExperimentCommand):
    help = 'Mide la latencia del profesor, de cada bloque eliminado y del modelo podado'
    command_name = 'bench_latency'

    def run_experiment(self, config, output_dir, run):
        teacher = load_teacher(config, output_dir)
        section = config['latency']
        shape = (section['batch'], teacher.spec.input_dim)
        seed = derive_seed(config['seed'], 'latency')

        def measure(model):
            return measure_latency(model, shape, section['trials'], section['warmup'], seed)

        original = measure(teacher)
        rows = [self.row('original', '', teacher, original, 0.0)]
        for block in teacher.active_blocks():
            dropped = drop_block(teacher, block)
            stats = measure(dropped)
            rows.append(self.row('drop_block', str(block), dropped, stats, latency_ratio(original, stats, clamp=False)))

        pruned_path = output_dir / PRUNED_FILE
        if pruned_path.exists():
            pruned = load_checkpoint(pruned_path)
            stats = measure(pruned)
            chosen = ' '.join(str(b) for b in sorted(pruned.dropped))
            rows.append(self.row('pruned', chosen, pruned, stats, latency_ratio(original, stats, clamp=False)))

        write_table(output_dir / LATENCY_FILE, rows)
        for row in rows:
            self.stdout.write(f'  {row["model"]:<10} {row["blocks"]:<28} {row["mean_ms"]:.4f} ms  τ={row["tau"]:.4f}')

        single = [row['tau'] for row in rows if row['model'] == 'drop_block']
        non_positive = [row['blocks'] for row in rows[1:] if row['tau'] <= 0]
        metrics = {
            'trials': section['trials'],
            'warmup': section['warmup'],
            'input_shape': list(shape),
            'tau_min_single': min(single) if single else None,
            'tau_max_single': max(single) if single else None,
            'tau_pruned': rows[-1]['tau'] if rows[-1]['model'] == 'pruned' else None,
            'non_positive_tau': non_positive,
        }
        if non_positive:
            message = f'τ ≤ 0 en: {", ".join(non_positive)}'
            if section['strict']:
                raise InvariantError(message)
            self.stdout.write(self.style.WARNING(message))
        return metrics

    def row(self, kind, blocks, model, stats, tau):
        return {
            'model': kind,
            'blocks': blocks,
            'flops': count_flops(model),
            'mean_ms': stats.mean_ms,
            'std_ms': stats.std_ms,
            'trials': stats.trials,
            'warmup': stats.warmup,
            'tau': tau,
        }
