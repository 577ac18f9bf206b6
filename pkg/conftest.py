"""Pytest wiring equivalent to `python manage.py test`: settings, BLAS threads, test DB."""
import os

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'config.settings')

from decouple import config  # noqa: E402

_threads = str(config('COMPRESION_BLAS_THREADS', default=1, cast=int))
for _var in ('OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS', 'MKL_NUM_THREADS'):
    os.environ.setdefault(_var, _threads)

import django  # noqa: E402

django.setup()

import pytest  # noqa: E402


@pytest.fixture(scope='session', autouse=True)
def _django_test_environment():
    from django.test.utils import (
        setup_databases,
        setup_test_environment,
        teardown_databases,
        teardown_test_environment,
    )

    setup_test_environment()
    old_config = setup_databases(verbosity=0, interactive=False)
    yield
    teardown_databases(old_config, verbosity=0)
    teardown_test_environment()
