"""
Self-verification for Simple Bounds
Runs the identity, oracle and sandwich suites and exits 1 on any failure
"""

from django.core.management.base import BaseCommand, CommandError

from bounds.conf import get_setting
from bounds.exceptions import DomainError
from bounds.verification import MAX_VERIFY_N, run_all

from ._common import exit_codes


class Command(BaseCommand):
    help = 'Run the identity, oracle and sandwich property suites'

    def add_arguments(self, parser):
        parser.add_argument('--max-n', type=int, default=get_setting('VERIFY_MAX_N'))
        parser.add_argument('--trials', type=int, default=get_setting('VERIFY_TRIALS'))
        parser.add_argument('--seed', type=int, default=get_setting('VERIFY_SEED'))
        parser.add_argument(
            '--inject-fault',
            choices=['parity'],
            help='Deliberately break a rule to confirm the suites can fail',
        )

    def handle(self, *args, **options):
        max_n, trials = options['max_n'], options['trials']

        with exit_codes():
            if not 2 <= max_n <= MAX_VERIFY_N:
                raise DomainError(f'Requires 2 <= max-n <= {MAX_VERIFY_N}', f'max-n={max_n}')
            if trials < 1:
                raise DomainError('trials must be positive', f'trials={trials}')

        self.stdout.write('=' * 50)
        self.stdout.write(f'Verification  max-n={max_n}  trials={trials}  seed={options["seed"]}')
        if options['inject_fault']:
            self.stdout.write(self.style.WARNING(f'Injected fault: {options["inject_fault"]}'))
        self.stdout.write('=' * 50)

        suites = run_all(
            max_n=max_n,
            trials=trials,
            seed=options['seed'],
            relabelings=get_setting('RELABELINGS_PER_CASE'),
            flip_parity=options['inject_fault'] == 'parity',
        )

        limit = get_setting('MAX_REPORTED_FAILURES')
        failed = 0
        for suite in suites:
            passed = suite.cases - len(suite.failures)
            line = f'{suite.name}: {passed}/{suite.cases} passed'
            if suite.passed:
                self.stdout.write(self.style.SUCCESS(f'✓ {line}'))
                continue
            failed += 1
            self.stdout.write(self.style.ERROR(f'✗ {line}'))
            for params in suite.failures[:limit]:
                detail = ', '.join(f'{key}={value}' for key, value in params.items())
                self.stdout.write(f'    {detail}')
            if len(suite.failures) > limit:
                self.stdout.write(f'    ... {len(suite.failures) - limit} more')

        self.stdout.write('=' * 50)
        if failed:
            raise CommandError(f'{failed} of {len(suites)} suites failed', returncode=1)
        self.stdout.write(self.style.SUCCESS(f'All {len(suites)} suites passed'))
