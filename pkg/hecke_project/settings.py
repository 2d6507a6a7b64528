"""
Django settings for the hecke project.

Exact combinatorics of Hecke modifications: root systems, affine Weyl groups,
affine Grassmannian cells, wonderful-compactification tangent maps and
parametrization schemes. There is no web surface; the project is driven
through management commands.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = config('SECRET_KEY', default='django-insecure-hecke-local-only')

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='localhost,127.0.0.1', cast=lambda v: [s.strip() for s in v.split(',')])

# Application definition
INSTALLED_APPS = [
    # Third-party apps
    'rest_framework',

    # Local apps
    'core',
    'rootsys',
    'weyl',
    'affine',
    'cells',
    'wonderful',
    'schemes',
]

# Nothing is persisted
DATABASES = {}

USE_TZ = True

REST_FRAMEWORK = {
    'UNAUTHENTICATED_USER': None,
}

# Logging Configuration
LOG_LEVEL = config('LOG_LEVEL', default='WARNING')
LOG_FILE = config('LOG_FILE', default='')

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
            'level': 'DEBUG',
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': LOG_LEVEL,
    },
}

if LOG_FILE:
    LOGGING['handlers']['file'] = {
        'level': 'INFO',
        'class': 'logging.FileHandler',
        'filename': LOG_FILE,
        'formatter': 'verbose',
    }
    LOGGING['root']['handlers'].append('file')

# Application-specific settings
HECKE_SETTINGS = {
    'WORKERS': config('HECKE_WORKERS', default=1, cast=int),  # sweep workers, no semantic effect
    'SEARCH_BUDGET': config('HECKE_SEARCH_BUDGET', default=1000000, cast=int),
    'WEYL_ENUMERATION_CAP': config('HECKE_WEYL_CAP', default=10000000, cast=int),
    'DEFAULT_SEED': config('HECKE_SEED', default=0, cast=int),
    'RANDOM_POINTS': config('HECKE_RANDOM_POINTS', default=100, cast=int),
}

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'
