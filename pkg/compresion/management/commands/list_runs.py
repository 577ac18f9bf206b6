# compresion/management/commands/list_runs.py

import json

from django.core.management.base import BaseCommand, CommandError

from ...models import ExperimentRun
from ...serializers import ExperimentRunSerializer


class Command(BaseCommand):
    help = 'Lista el historial de ejecuciones registradas, o el detalle de una en JSON'

    def add_arguments(self, parser):
        parser.add_argument('run_id', nargs='?', type=int, help='Id de la ejecución a mostrar en detalle')
        parser.add_argument('--command', dest='command_filter', help='Filtra por comando (compress, verify_theory, ...)')
        parser.add_argument('--limit', type=int, default=20, help='Máximo de ejecuciones listadas')

    def handle(self, *args, **options):
        if options['run_id'] is not None:
            try:
                run = ExperimentRun.objects.prefetch_related('block_scores').get(pk=options['run_id'])
            except ExperimentRun.DoesNotExist:
                raise CommandError(f'Ejecución #{options["run_id"]} no encontrada')
            data = ExperimentRunSerializer(run).data
            self.stdout.write(json.dumps(data, indent=2, ensure_ascii=False, default=str))
            return

        runs = ExperimentRun.objects.all()
        if options['command_filter']:
            runs = runs.filter(command=options['command_filter'])
        runs = list(runs[:options['limit']])
        if not runs:
            self.stdout.write(self.style.WARNING('No hay ejecuciones registradas'))
            return

        for item in ExperimentRunSerializer(runs, many=True).data:
            line = f'#{item["id"]:<5} {item["command"]:<16} seed={item["seed"]:<6} {item["status_display"]:<11} {item["output_dir"]}'
            if item['status'] == ExperimentRun.FAILED:
                self.stdout.write(self.style.ERROR(f'{line}  ({item["error"]})'))
            elif item['status'] == ExperimentRun.SUCCESS:
                self.stdout.write(self.style.SUCCESS(line))
            else:
                self.stdout.write(line)
