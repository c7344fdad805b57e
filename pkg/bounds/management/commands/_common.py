"""
Shared option handling for the bounds management commands
"""

from contextlib import contextmanager

from django.core.management.base import CommandError

from bounds.engine import BoundMethod
from bounds.exceptions import BoundsError
from bounds.rendering import OutputFormat

METHOD_CHOICES = {
    'all': None,
    'classical': [BoundMethod.CLASSICAL],
    't3': [BoundMethod.COEFFICIENT],
    't4': [BoundMethod.TAIL_MAX],
    't5': [BoundMethod.PERMUTATION_AVERAGE],
}


def add_format_argument(parser):
    parser.add_argument(
        '--format',
        choices=OutputFormat.values,
        default=OutputFormat.TEXT,
        help='Report format (default: text)',
    )


def add_order_arguments(parser):
    parser.add_argument('--r', type=int, required=True, help='Bound P(X >= r)')
    parser.add_argument('--k', type=int, required=True, help='Truncation order; uses intersections to order k+1')


@contextmanager
def exit_codes():
    """Translate BoundsError into CommandError carrying its exit code"""
    try:
        yield
    except BoundsError as exc:
        raise CommandError(str(exc), returncode=exc.exit_code)
