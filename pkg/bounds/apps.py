from django.apps import AppConfig


class BoundsConfig(AppConfig):
    name = 'bounds'
    verbose_name = 'Bounds on the Number of Occurring Events'
