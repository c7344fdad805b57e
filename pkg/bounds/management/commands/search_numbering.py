"""
Management command searching for the event numbering that maximizes the
theorem4 correction
"""

from django.core.management.base import BaseCommand

from bounds.conf import get_setting
from bounds.engine import BoundsReport, SearchMode, best_numbering_search
from bounds.events import s_sums
from bounds.exceptions import DomainError
from bounds.loaders import load_input
from bounds.rendering import render
from bounds.schemas import ReportDocument

from ._common import add_format_argument, add_order_arguments, exit_codes


class Command(BaseCommand):
    help = 'Search event numberings for the largest theorem4 correction'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='JSON input document')
        add_order_arguments(parser)
        parser.add_argument(
            '--mode',
            choices=SearchMode.values,
            default=SearchMode.EXHAUSTIVE,
            help='exhaustive (n <= 8) or sampled',
        )
        parser.add_argument(
            '--budget',
            type=int,
            default=get_setting('SEARCH_BUDGET'),
            help='Numberings examined in sampled mode',
        )
        parser.add_argument('--seed', type=int, default=get_setting('SEED'))
        add_format_argument(parser)

    def handle(self, *args, **options):
        r, k = options['r'], options['k']

        with exit_codes():
            if r < 1 or k < r:
                raise DomainError('requires k ≥ r', f'r={r}, k={k}')
            if options['mode'] == SearchMode.SAMPLED and options['budget'] < 1:
                raise DomainError('budget must be positive', f'budget={options["budget"]}')
            system = load_input(options['input'], k).system
            search = best_numbering_search(
                system,
                r,
                k,
                mode=options['mode'],
                budget=options['budget'],
                seed=options['seed'],
            )

        report = BoundsReport(
            n=system.n,
            depth=system.depth,
            digest=system.digest(),
            r=r,
            k=k,
            s_values=s_sums(system).values,
            rows=[search.result],
        )
        document = ReportDocument.from_report(report, labeling=search.labeling)
        self.stdout.write(render(document, options['format']), ending='')
