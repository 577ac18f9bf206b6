# Generated by Django 5.2.7 on 2026-10-17 10:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ExperimentRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(help_text='Comando que originó la ejecución (train_teacher, compress, ...)', max_length=50)),
                ('seed', models.BigIntegerField(default=0, help_text='Semilla maestra de la configuración resuelta')),
                ('status', models.CharField(choices=[('running', 'En curso'), ('success', 'Completada'), ('failed', 'Fallida')], db_index=True, default='running', max_length=10)),
                ('output_dir', models.CharField(help_text='Directorio donde se escribieron config.json, metrics.json, etc.', max_length=500)),
                ('config', models.JSONField(default=dict, help_text='Configuración resuelta (suficiente para repetir la ejecución)')),
                ('metrics', models.JSONField(blank=True, default=dict)),
                ('error', models.TextField(blank=True, default='')),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('finished_at', models.DateTimeField(blank=True, null=True)),
            ],
            options={
                'verbose_name': 'Ejecución de experimento',
                'verbose_name_plural': 'Ejecuciones de experimentos',
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='BlockScoreRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('stage', models.PositiveIntegerField()),
                ('index', models.PositiveIntegerField()),
                ('recoverability', models.FloatField(help_text='R: distancia de features tras entrenar adaptadores')),
                ('tau', models.FloatField(help_text='Fracción de latencia ahorrada al eliminar el bloque')),
                ('score', models.FloatField(help_text='R/τ; menor score, antes se elimina')),
                ('latency_mean_ms', models.FloatField(blank=True, null=True)),
                ('latency_std_ms', models.FloatField(blank=True, null=True)),
                ('chosen', models.BooleanField(default=False)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='block_scores', to='compresion.experimentrun')),
            ],
            options={
                'verbose_name': 'Score de bloque',
                'verbose_name_plural': 'Scores de bloques',
                'ordering': ['run', 'score', 'stage', 'index'],
                'unique_together': {('run', 'stage', 'index')},
            },
        ),
    ]
