from core.cli import ReportCommand, add_format_argument, add_solver_arguments, add_volatility_arguments
from core.serializers import CurveRequestSerializer
from core.services import curve_report


class Command(ReportCommand):
    help = 'Cubeful equity curves of the three cube states on a uniform P grid'

    serializer_class = CurveRequestSerializer
    option_keys = ('w', 'l', 'alpha', 'alpha_local', 'alpha_remote', 'scale_statistical',
                   'method', 'jump_kind', 'grid_size', 'n_points')

    def add_arguments(self, parser):
        parser.add_argument('--w', type=float, required=True)
        parser.add_argument('--l', type=float, required=True)
        parser.add_argument('--n-points', type=int, default=101, help='Rows including both ends')
        add_volatility_arguments(parser)
        add_solver_arguments(parser, methods=('linear', 'nonlinear', 'exact', 'live'))
        add_format_argument(parser, default='csv')

    def build_report(self, attrs):
        return curve_report(attrs)
