from core.cli import ReportCommand, add_format_argument, add_solver_arguments, add_volatility_arguments
from core.serializers import CUBE_CHOICES, AdviceRequestSerializer
from core.services import advice_report


class Command(ReportCommand):
    help = 'Recommend a cube action for a position given its cubeless probabilities'

    serializer_class = AdviceRequestSerializer
    option_keys = ('p', 'gammon_win', 'backgammon_win', 'gammon_loss', 'backgammon_loss', 'cube',
                   'cube_value', 'alpha', 'alpha_local', 'alpha_remote', 'scale_statistical',
                   'method', 'jump_kind', 'grid_size')

    def add_arguments(self, parser):
        parser.add_argument('--p', type=float, required=True, help='Cubeless probability of winning')
        parser.add_argument('--gammon-win', type=float, default=0.0)
        parser.add_argument('--backgammon-win', type=float, default=0.0)
        parser.add_argument('--gammon-loss', type=float, default=0.0)
        parser.add_argument('--backgammon-loss', type=float, default=0.0)
        parser.add_argument('--cube', choices=list(CUBE_CHOICES), default='centered',
                            help="'opponent' means the opponent owns the cube and may double")
        parser.add_argument('--cube-value', type=int, default=1)
        add_volatility_arguments(parser)
        add_solver_arguments(parser)
        add_format_argument(parser)

    def build_report(self, attrs):
        return advice_report(attrs)
