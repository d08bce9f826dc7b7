from core.cli import ReportCommand, add_format_argument
from core.distributions import JumpKind

from analytics.serializers import DuelRequestSerializer
from analytics.services import duel_report


def add_process_arguments(parser):
    parser.add_argument('--alpha-ply', type=float, required=True, help='Per-ply jump volatility')
    parser.add_argument('--jump-kind', choices=[k.value for k in JumpKind])
    parser.add_argument('--w', type=float, help='Points for a win (default 1)')
    parser.add_argument('--l', type=float, help='Points for a loss (default 1)')
    parser.add_argument('--max-plies', type=int, help='Truncate games after this many plies')


class Command(ReportCommand):
    help = 'Play a seeded duel between two cube strategies on the synthetic jump process'

    serializer_class = DuelRequestSerializer
    option_keys = ('alpha_ply', 'jump_kind', 'w', 'l', 'cube_cap', 'max_plies', 'strategy_a', 'strategy_b',
                   'n_games', 'seed', 'chunks', 'save_record')

    def add_arguments(self, parser):
        add_process_arguments(parser)
        parser.add_argument('--cube-cap', type=int, help='Highest cube value (power of two)')
        parser.add_argument('--a', dest='strategy_a', required=True,
                            help="Side A: 'cubeless' or 'jump:ALPHA[:METHOD][:scaled]'")
        parser.add_argument('--b', dest='strategy_b', required=True, help='Side B, same syntax as --a')
        parser.add_argument('--games', dest='n_games', type=int)
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--chunks', type=int, help='Split the games into this many Celery tasks')
        parser.add_argument('--save', dest='save_record', action='store_true', help='Store the result as a DuelRecord')
        add_format_argument(parser, default='json')

    def build_report(self, attrs):
        return duel_report(attrs)
