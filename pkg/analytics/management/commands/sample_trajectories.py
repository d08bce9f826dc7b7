from django.core.management.base import BaseCommand

from core.cli import numerical_guard, validated

from analytics.serializers import TrajectorySampleSerializer
from analytics.sim import sample_trajectories
from analytics.trajectories import trajectories_to_csv, write_trajectories

from .simulate import add_process_arguments


class Command(BaseCommand):
    help = 'Write cubeless synthetic trajectories as game_id,ply,p_win CSV'

    def add_arguments(self, parser):
        add_process_arguments(parser)
        parser.add_argument('--games', dest='n_games', type=int, required=True)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--output', help='CSV path; stdout when omitted')

    def handle(self, *args, **options):
        attrs = validated(TrajectorySampleSerializer, options,
                          ('alpha_ply', 'jump_kind', 'w', 'l', 'max_plies', 'n_games', 'seed'))
        with numerical_guard():
            trajectories = sample_trajectories(attrs['process'], attrs['n_games'], attrs['seed'])

        truncated = sum(t.truncated for t in trajectories)
        if options.get('output'):
            with open(options['output'], 'w', newline='') as fh:
                rows = write_trajectories(trajectories, fh)
            self.stdout.write(self.style.SUCCESS(
                f"Wrote {rows} rows for {len(trajectories)} games to {options['output']} ({truncated} truncated)"
            ))
        else:
            self.stdout.write(trajectories_to_csv(trajectories), ending='')
