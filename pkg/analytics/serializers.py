# analytics/serializers.py - Request validation for duels and estimators

from rest_framework import serializers

from core.distributions import JumpKind
from core.exceptions import CubeModelError
from core.params import MAX_VOLATILITY
from core.serializers import FloatListField
from core.utils import sim_setting

from .estimators import DEFAULT_HIGH_WINDOW, DEFAULT_LOW_WINDOW
from .sim import ProcessConfig, strategy_from_dict

STRATEGY_METHODS = ('linear', 'nonlinear', 'exact')


def parse_strategy(spec) -> dict:
    """``cubeless`` or ``jump:ALPHA[:METHOD][:scaled]``; dicts pass through."""
    if isinstance(spec, dict):
        return spec
    parts = [part.strip() for part in str(spec).split(':')]
    if parts == ['cubeless']:
        return {'kind': 'cubeless'}
    if parts[0] != 'jump' or len(parts) < 2:
        raise ValueError(f"Unknown strategy {spec!r}; use 'cubeless' or 'jump:ALPHA[:METHOD][:scaled]'")
    alpha = float(parts[1])
    rest = parts[2:]
    scaled = 'scaled' in rest
    rest = [part for part in rest if part != 'scaled']
    method = rest[0] if rest else 'linear'
    if method not in STRATEGY_METHODS or len(rest) > 1:
        raise ValueError(f"Bad strategy method in {spec!r}")
    return {'kind': 'jump', 'alpha': alpha, 'method': method, 'scale_statistical': scaled}


class StrategyField(serializers.Field):
    def to_internal_value(self, data):
        try:
            payload = parse_strategy(data)
            alpha = float(payload.get('alpha', 0.0))
            if not 0.0 <= alpha < MAX_VOLATILITY:
                raise ValueError(f"Strategy alpha must lie in [0, {MAX_VOLATILITY}), got {alpha}")
            return strategy_from_dict(payload)
        except (ValueError, TypeError, KeyError, CubeModelError) as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return value.to_dict()


class ProcessInputSerializer(serializers.Serializer):
    alpha_ply = serializers.FloatField(min_value=0.0, max_value=MAX_VOLATILITY)
    jump_kind = serializers.ChoiceField(choices=[k.value for k in JumpKind], default=JumpKind.DOUBLE_EXPONENTIAL.value)
    w = serializers.FloatField(default=1.0, min_value=1.0, max_value=3.0)
    l = serializers.FloatField(default=1.0, min_value=1.0, max_value=3.0)
    cube_cap = serializers.IntegerField(required=False, min_value=2)
    max_plies = serializers.IntegerField(required=False, min_value=10)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        try:
            attrs['process'] = ProcessConfig.from_volatility(
                attrs['alpha_ply'],
                attrs['jump_kind'],
                w=attrs['w'],
                l=attrs['l'],
                cube_cap=attrs.get('cube_cap', int(sim_setting('CUBE_CAP'))),
                max_plies=attrs.get('max_plies', int(sim_setting('MAX_PLIES'))),
            )
        except CubeModelError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


class DuelRequestSerializer(ProcessInputSerializer):
    strategy_a = StrategyField()
    strategy_b = StrategyField()
    n_games = serializers.IntegerField(min_value=1, max_value=10_000_000)
    seed = serializers.IntegerField(default=0, min_value=0)
    chunks = serializers.IntegerField(default=1, min_value=1, max_value=1024)
    save_record = serializers.BooleanField(default=False)

    def to_internal_value(self, data):
        # n_games falls back to the configured default
        if hasattr(data, 'copy'):
            data = data.copy()
        if data.get('n_games') in (None, ''):
            data['n_games'] = int(sim_setting('DEFAULT_GAMES'))
        if data.get('chunks') in (None, ''):
            data['chunks'] = int(sim_setting('DUEL_CHUNKS'))
        return super().to_internal_value(data)


class TrajectorySampleSerializer(ProcessInputSerializer):
    n_games = serializers.IntegerField(min_value=1, max_value=1_000_000)
    seed = serializers.IntegerField(default=0, min_value=0)


class WindowSerializer(serializers.Serializer):
    window_low = FloatListField(default=list(DEFAULT_LOW_WINDOW), min_length=2, max_length=2)
    window_high = FloatListField(default=list(DEFAULT_HIGH_WINDOW), min_length=2, max_length=2)

    def validate(self, attrs):
        low, high = attrs['window_low'], attrs['window_high']
        if not (0.0 <= low[0] <= low[1] < high[0] <= high[1] <= 1.0):
            raise serializers.ValidationError(f"Windows must be ordered inside [0, 1]: {low}, {high}")
        attrs['window_low'], attrs['window_high'] = tuple(low), tuple(high)
        return attrs
