# compresion/management/commands/_base.py

from django.core.management.base import BaseCommand, CommandError

from ...errors import CompresionError, ConfigError, DatasetError, InvariantError
from ...experiments import CONFIG_FILE, METRICS_FILE, load_config, registered_run, resolve_output_dir, write_json

EXIT_CONFIG = 1
EXIT_INVARIANT = 2
EXIT_IO = 3


class ExperimentCommand(BaseCommand):
    """
    Base de los comandos de experimento: lee la configuración (--config,
    --set, --seed), escribe config.json en el directorio de salida, registra
    la ejecución y traduce los errores a códigos de salida.

    Las subclases implementan run_experiment(config, output_dir, run) y
    devuelven el diccionario de métricas que va a metrics.json.
    """
    command_name = None

    def add_arguments(self, parser):
        parser.add_argument('--config', help='Archivo JSON con la configuración del experimento')
        parser.add_argument(
            '--set', action='append', dest='overrides', default=[], metavar='CLAVE=VALOR',
            help='Sobrescribe una clave de la configuración (p. ej. --set tiny.m=50)',
        )
        parser.add_argument('--seed', type=int, help='Semilla maestra; cambia todas las semillas derivadas')

    def handle(self, *args, **options):
        try:
            config = load_config(options.get('config'), options.get('overrides'), options.get('seed'))
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=EXIT_CONFIG)
        except OSError as exc:
            raise CommandError(f'No se pudo leer la configuración: {exc}', returncode=EXIT_IO)

        try:
            output_dir = resolve_output_dir(config)
            write_json(output_dir / CONFIG_FILE, config)
        except OSError as exc:
            raise CommandError(f'No se pudo preparar el directorio de salida: {exc}', returncode=EXIT_IO)

        self.stdout.write(f'=== {self.command_name} (seed={config["seed"]}) → {output_dir} ===')
        try:
            with registered_run(self.command_name, config, output_dir) as run:
                metrics = self.run_experiment(config, output_dir, run)
                write_json(output_dir / METRICS_FILE, metrics)
                run.metrics = metrics
        except ConfigError as exc:
            raise CommandError(str(exc), returncode=EXIT_CONFIG)
        except (OSError, DatasetError) as exc:
            raise CommandError(str(exc), returncode=EXIT_IO)
        except InvariantError as exc:
            raise CommandError(str(exc), returncode=EXIT_INVARIANT)
        except CompresionError as exc:
            raise CommandError(f'{type(exc).__name__}: {exc}', returncode=EXIT_INVARIANT)

        self.stdout.write(self.style.SUCCESS(f'✓ {self.command_name} completado: {output_dir}'))

    def run_experiment(self, config, output_dir, run):
        raise NotImplementedError
