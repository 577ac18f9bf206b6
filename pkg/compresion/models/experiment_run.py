# compresion/models/experiment_run.py
from django.db import models


class ExperimentRun(models.Model):
    """
    Historial navegable de ejecuciones de los comandos. Los archivos del
    output_dir siguen siendo el resultado oficial; esto es solo el registro.
    """

    RUNNING = 'running'
    SUCCESS = 'success'
    FAILED = 'failed'

    STATUS_CHOICES = [
        (RUNNING, 'En curso'),
        (SUCCESS, 'Completada'),
        (FAILED, 'Fallida'),
    ]

    command = models.CharField(
        max_length=50,
        help_text="Comando que originó la ejecución (train_teacher, compress, ...)"
    )
    seed = models.BigIntegerField(
        default=0,
        help_text="Semilla maestra de la configuración resuelta"
    )
    status = models.CharField(
        max_length=10,
        choices=STATUS_CHOICES,
        default=RUNNING,
        db_index=True,
    )
    output_dir = models.CharField(
        max_length=500,
        help_text="Directorio donde se escribieron config.json, metrics.json, etc."
    )
    config = models.JSONField(
        default=dict,
        help_text="Configuración resuelta (suficiente para repetir la ejecución)"
    )
    metrics = models.JSONField(default=dict, blank=True)
    error = models.TextField(blank=True, default='')
    started_at = models.DateTimeField(auto_now_add=True)
    finished_at = models.DateTimeField(null=True, blank=True)

    def __str__(self):
        return f"{self.command} #{self.id} ({self.get_status_display()})"

    class Meta:
        verbose_name = "Ejecución de experimento"
        verbose_name_plural = "Ejecuciones de experimentos"
        ordering = ['-started_at']
