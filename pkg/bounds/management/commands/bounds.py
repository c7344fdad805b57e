"""
Management command computing bounds on P(X >= r) for an input document
"""

from django.core.management.base import BaseCommand, CommandError

from bounds.conf import get_setting
from bounds.engine import bounds_report
from bounds.exceptions import DomainError
from bounds.loaders import load_input, load_joint
from bounds.rendering import render
from bounds.schemas import ReportDocument

from ._common import METHOD_CHOICES, add_format_argument, add_order_arguments, exit_codes


class Command(BaseCommand):
    help = 'Compute bounds on the probability that at least r of n events occur'

    def add_arguments(self, parser):
        parser.add_argument('--input', required=True, help='JSON input document')
        parser.add_argument('--joint', help='JSON joint document giving the exact reference')
        add_order_arguments(parser)
        parser.add_argument(
            '--method',
            choices=list(METHOD_CHOICES),
            default='all',
            help='Bound family: t3 optimal coefficient, t4 maximal tail, t5 averaged numbering (default: all applicable)',
        )
        add_format_argument(parser)
        parser.add_argument('--clamp', action='store_true', help='Show values clipped to [0, 1]')

    def handle(self, *args, **options):
        r, k = options['r'], options['k']

        with exit_codes():
            if r < 1 or k < r:
                raise DomainError('requires k ≥ r', f'r={r}, k={k}')
            loaded = load_input(options['input'], k)
            joint = loaded.joint
            if options['joint']:
                joint = load_joint(options['joint'])
            report = bounds_report(
                loaded.system,
                r,
                k,
                joint=joint,
                methods=METHOD_CHOICES[options['method']],
                tolerance=get_setting('TOLERANCE'),
            )

        document = ReportDocument.from_report(report)
        self.stdout.write(render(document, options['format'], show_clamped=options['clamp']), ending='')

        if not report.rows:
            raise CommandError('No requested bound could be computed', returncode=3)
