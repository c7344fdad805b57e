"""
Management command reproducing the six-event reference table
"""

from django.core.management.base import BaseCommand

from bounds.benchmark import benchmark_report
from bounds.conf import get_setting
from bounds.rendering import render
from bounds.schemas import ReportDocument

from ._common import add_format_argument, exit_codes


class Command(BaseCommand):
    help = 'Reproduce the bounds table for the product-form reference system (n=6, r=1, k=2)'

    def add_arguments(self, parser):
        add_format_argument(parser)
        parser.add_argument(
            '--mc-trials',
            type=int,
            default=get_setting('MC_TRIALS'),
            help='Renumberings for the Monte Carlo cross-check (0 to skip)',
        )
        parser.add_argument('--seed', type=int, default=get_setting('SEED'))

    def handle(self, *args, **options):
        with exit_codes():
            report = benchmark_report(
                mc_trials=options['mc_trials'],
                seed=options['seed'],
                tolerance=get_setting('TOLERANCE'),
            )
        document = ReportDocument.from_report(report)
        self.stdout.write(render(document, options['format'], show_clamped=True), ending='')
