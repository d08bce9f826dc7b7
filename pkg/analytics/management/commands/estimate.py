import csv

from django.core.management.base import CommandError

from core.cli import EXIT_USAGE, ReportCommand, add_format_argument
from core.exceptions import InvalidParameterError

from analytics.serializers import WindowSerializer
from analytics.services import estimate_report
from analytics.trajectories import read_trajectories_file


def read_outcomes(path):
    """Rollout outcomes as CSV with header weight,p_win."""
    with open(path, newline='') as fh:
        reader = csv.DictReader(fh)
        try:
            return [(float(row['weight']), float(row['p_win'])) for row in reader]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameterError(f"{path}: expected columns weight,p_win ({exc})") from exc


class Command(ReportCommand):
    help = 'Estimate remote volatility from trajectories and/or local volatility from rollout outcomes'

    serializer_class = WindowSerializer
    option_keys = ('window_low', 'window_high')

    def add_arguments(self, parser):
        parser.add_argument('--trajectories', help='Trajectory CSV (game_id,ply,p_win)')
        parser.add_argument('--outcomes', help='Two-ply rollout outcomes CSV (weight,p_win)')
        parser.add_argument('--window-low', type=float, nargs=2, metavar=('LO', 'HI'))
        parser.add_argument('--window-high', type=float, nargs=2, metavar=('LO', 'HI'))
        add_format_argument(parser, default='json')

    def handle(self, *args, **options):
        if not options.get('trajectories') and not options.get('outcomes'):
            raise CommandError('Give --trajectories and/or --outcomes', returncode=EXIT_USAGE)
        self._options = options
        super().handle(*args, **options)

    def build_report(self, attrs):
        options = self._options
        try:
            trajectories = outcomes = None
            if options.get('trajectories'):
                trajectories = list(read_trajectories_file(options['trajectories']).values())
            if options.get('outcomes'):
                outcomes = read_outcomes(options['outcomes'])
        except (OSError, InvalidParameterError) as exc:
            raise CommandError(f"Cannot read input: {exc}", returncode=EXIT_USAGE)
        return estimate_report(trajectories, outcomes, attrs['window_low'], attrs['window_high'])
