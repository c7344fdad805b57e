"""
Django settings for simple_bounds project.
"""

from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# Commands never serve requests; the key only satisfies Django's startup checks.
SECRET_KEY = 'django-insecure-simple-bounds-cli'

DEBUG = False

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'bounds',
]

# No models, so no database
DATABASES = {}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Bounds Configuration
BOUNDS = {
    'VERIFY_MAX_N': 8,
    'VERIFY_TRIALS': 500,
    'VERIFY_SEED': 42,
    'MC_TRIALS': 10000,
    'SEARCH_BUDGET': 1000,
    'SEED': 42,
    'RELABELINGS_PER_CASE': 5,
    'TOLERANCE': 1e-9,
    'MAX_REPORTED_FAILURES': 10,
}

# Logging Configuration
# Reports go to stdout; diagnostics stay on stderr.
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'stream': 'ext://sys.stderr',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'WARNING',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
        'bounds': {
            'handlers': ['console'],
            'level': 'INFO',
            'propagate': False,
        },
    },
}
