"""
Settings accessor for the bounds app

Usage:
    trials = get_setting('VERIFY_TRIALS')
"""

from django.conf import settings


DEFAULTS = {
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


def get_setting(name):
    """Return a BOUNDS setting, falling back to the app default"""
    overrides = getattr(settings, 'BOUNDS', {})
    if name in overrides:
        return overrides[name]
    return DEFAULTS[name]
