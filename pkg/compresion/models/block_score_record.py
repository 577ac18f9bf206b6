# compresion/models/block_score_record.py
from django.db import models

from .experiment_run import ExperimentRun


class BlockScoreRecord(models.Model):
    run = models.ForeignKey(
        ExperimentRun,
        on_delete=models.CASCADE,
        related_name='block_scores',
    )
    stage = models.PositiveIntegerField()
    index = models.PositiveIntegerField()
    recoverability = models.FloatField(help_text="R: distancia de features tras entrenar adaptadores")
    tau = models.FloatField(help_text="Fracción de latencia ahorrada al eliminar el bloque")
    score = models.FloatField(help_text="R/τ; menor score, antes se elimina")
    latency_mean_ms = models.FloatField(null=True, blank=True)
    latency_std_ms = models.FloatField(null=True, blank=True)
    chosen = models.BooleanField(default=False)

    def __str__(self):
        return f"stage{self.stage}.block{self.index} s={self.score:.4g}"

    class Meta:
        verbose_name = "Score de bloque"
        verbose_name_plural = "Scores de bloques"
        ordering = ['run', 'score', 'stage', 'index']
        unique_together = [('run', 'stage', 'index')]
