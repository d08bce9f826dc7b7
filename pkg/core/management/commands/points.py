from core.cli import ReportCommand, add_format_argument, add_solver_arguments, add_volatility_arguments
from core.serializers import PointsRequestSerializer
from core.services import points_report


class Command(ReportCommand):
    help = 'Print the ten cube decision points for a W/L game state'

    serializer_class = PointsRequestSerializer
    option_keys = ('w', 'l', 'alpha', 'alpha_local', 'alpha_remote', 'scale_statistical',
                   'method', 'jump_kind', 'grid_size')

    def add_arguments(self, parser):
        parser.add_argument('--w', type=float, required=True, help='Expected points on a win')
        parser.add_argument('--l', type=float, required=True, help='Expected points on a loss')
        add_volatility_arguments(parser)
        add_solver_arguments(parser)
        add_format_argument(parser)

    def build_report(self, attrs):
        return points_report(attrs)
