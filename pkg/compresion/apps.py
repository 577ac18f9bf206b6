from django.apps import AppConfig


class CompresionConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'compresion'
    verbose_name = 'Compresión de redes con conjuntos pequeños'
