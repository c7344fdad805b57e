"""Configure Django so pytest can run the bounds test suite."""

import os

import django


def pytest_configure(config):
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'simple_bounds.settings')
    django.setup()
