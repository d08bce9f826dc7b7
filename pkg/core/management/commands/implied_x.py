from core.cli import ReportCommand, add_format_argument
from core.janowski import DEFAULT_TABLE_VALUES
from core.serializers import ImpliedIndexRequestSerializer
from core.services import implied_x_report


class Command(ReportCommand):
    help = 'Janowski cube-life indexes x1/x2 implied by the jump model'

    serializer_class = ImpliedIndexRequestSerializer
    option_keys = ('alpha', 'w_values', 'l_values', 'alphas')

    def add_arguments(self, parser):
        parser.add_argument('--alpha', type=float, default=0.10)
        parser.add_argument('--w-values', type=float, nargs='+', default=list(DEFAULT_TABLE_VALUES))
        parser.add_argument('--l-values', type=float, nargs='+', default=list(DEFAULT_TABLE_VALUES))
        parser.add_argument('--alphas', type=float, nargs='+',
                            help='Sweep these volatilities over symmetric games W=L=--w-values')
        add_format_argument(parser)

    def build_report(self, attrs):
        return implied_x_report(attrs)
