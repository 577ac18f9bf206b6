from pathlib import Path
from decouple import config
from dj_database_url import parse as db_url

BASE_DIR = Path(__file__).resolve().parent.parent

# Buscar .env en el directorio raíz del proyecto
ENV_FILE = BASE_DIR / '.env'

SECRET_KEY = config('SECRET_KEY', default='django-insecure-compresion-local-key-12345')

DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = ['127.0.0.1', 'localhost']


INSTALLED_APPS = [
    'django.contrib.contenttypes',

    # DRF solo se usa para validar documentos de configuración y reportes
    'rest_framework',

    # Tu app
    'compresion',
]

DATABASES = {
    'default': config(
        'DATABASE_URL',
        default='sqlite:///' + str(BASE_DIR / 'db.sqlite3'),
        cast=db_url
    )
}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# --- Experimentos ---

# Directorio base para los output_dir relativos de cada experimento
COMPRESION_OUTPUT_ROOT = Path(config('COMPRESION_OUTPUT_ROOT', default=str(BASE_DIR / 'runs')))

# Hilos BLAS; manage.py los exporta antes de importar numpy (latencia en un solo hilo)
COMPRESION_BLAS_THREADS = config('COMPRESION_BLAS_THREADS', default=1, cast=int)

COMPRESION_LOG_LEVEL = config('COMPRESION_LOG_LEVEL', default='INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'compresion': {
            'handlers': ['console'],
            'level': COMPRESION_LOG_LEVEL,
            'propagate': False,
        },
    },
}
