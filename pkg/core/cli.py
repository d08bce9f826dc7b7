# core/cli.py - Shared plumbing for the management commands

import logging
from contextlib import contextmanager

from django.core.management.base import BaseCommand, CommandError

from .exceptions import CubeModelError
from .rendering import OutputFormat, Report, render

logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def add_volatility_arguments(parser):
    parser.add_argument('--alpha', type=float, help='Jump volatility for both roles')
    parser.add_argument('--alpha-local', type=float, help='Volatility at the current cube level')
    parser.add_argument('--alpha-remote', type=float, help='Volatility after a game reversal')
    parser.add_argument('--scale-statistical', action='store_true',
                        help='Multiply statistically estimated volatilities by 11.3/9.1')


def add_solver_arguments(parser, methods=('linear', 'nonlinear', 'exact')):
    parser.add_argument('--method', choices=methods, default='linear')
    parser.add_argument('--jump-kind', choices=['gaussian', 'double_exponential'])
    parser.add_argument('--grid-size', type=int, help='Buckets for the exact solver')


def add_format_argument(parser, default=OutputFormat.TEXT.value):
    parser.add_argument('--format', choices=[f.value for f in OutputFormat], default=default)


def validated(serializer_class, options, keys):
    """Run CLI options through a request serializer; bad input exits with status 2."""
    data = {k: options[k] for k in keys if options.get(k) is not None}
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise CommandError(f"Invalid arguments: {serializer.errors}", returncode=EXIT_USAGE)
    return serializer.validated_data


@contextmanager
def numerical_guard():
    """Solver failures exit with status 3."""
    try:
        yield
    except CubeModelError as exc:
        logger.error(f"Numerical failure: {exc}")
        raise CommandError(f"Numerical failure: {exc}", returncode=EXIT_NUMERICAL)


class ReportCommand(BaseCommand):
    """Base for commands that validate options, build a Report and print it."""

    serializer_class = None
    option_keys = ()

    def build_report(self, attrs) -> Report:
        raise NotImplementedError

    def handle(self, *args, **options):
        attrs = validated(self.serializer_class, options, self.option_keys)
        with numerical_guard():
            report = self.build_report(attrs)
        self.stdout.write(render(report, options['format']))
