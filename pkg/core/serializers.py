# core/serializers.py - Request validation and response shaping for equity queries

from rest_framework import serializers

from .advisor import EquityMethod
from .distributions import JumpKind
from .exceptions import CubeModelError
from .janowski import DEFAULT_TABLE_VALUES
from .params import (
    MAX_VOLATILITY, CubeKind, CubeState, GammonProbs, VolatilityPair, scale_statistical_volatility,
)

SCHEMA_VERSION = 1

CUBE_CHOICES = {
    'centered': CubeKind.CENTERED,
    'owned': CubeKind.PLAYER_OWNS,
    'opponent': CubeKind.OPPONENT_OWNS,
}


class FloatListField(serializers.ListField):
    """List of floats given as a list, repeated query keys, or one comma-separated string."""

    child = serializers.FloatField()

    def to_internal_value(self, data):
        if isinstance(data, str):
            data = [part for part in data.split(',') if part.strip()]
        elif isinstance(data, (list, tuple)) and len(data) == 1 and isinstance(data[0], str) and ',' in data[0]:
            data = [part for part in data[0].split(',') if part.strip()]
        return super().to_internal_value(data)


class VolatilityInputSerializer(serializers.Serializer):
    alpha = serializers.FloatField(required=False, min_value=0.0)
    alpha_local = serializers.FloatField(required=False, min_value=0.0)
    alpha_remote = serializers.FloatField(required=False, min_value=0.0)
    scale_statistical = serializers.BooleanField(default=False)

    def volatility_optional(self, attrs) -> bool:
        return False

    def validate(self, attrs):
        attrs = super().validate(attrs)
        shorthand = attrs.get('alpha')
        if shorthand is None and self.volatility_optional(attrs):
            shorthand = 0.0
        alpha_local = attrs.get('alpha_local', shorthand)
        alpha_remote = attrs.get('alpha_remote', shorthand)
        if alpha_local is None or alpha_remote is None:
            raise serializers.ValidationError("Give --alpha or both --alpha-local and --alpha-remote")
        if attrs.get('scale_statistical'):
            alpha_local = scale_statistical_volatility(alpha_local)
            alpha_remote = scale_statistical_volatility(alpha_remote)
        for name, value in (('alpha_local', alpha_local), ('alpha_remote', alpha_remote)):
            if value >= MAX_VOLATILITY:
                raise serializers.ValidationError({name: f"Must be below {MAX_VOLATILITY}, got {value}"})
        attrs['vols'] = VolatilityPair(alpha_local, alpha_remote)
        return attrs


class SolverInputSerializer(VolatilityInputSerializer):
    method = serializers.ChoiceField(choices=[m.value for m in EquityMethod], default=EquityMethod.LINEAR.value)
    jump_kind = serializers.ChoiceField(choices=[k.value for k in JumpKind], required=False)
    grid_size = serializers.IntegerField(required=False, min_value=50, max_value=4000)


class PointsRequestSerializer(SolverInputSerializer):
    w = serializers.FloatField(min_value=1.0, max_value=3.0)
    l = serializers.FloatField(min_value=1.0, max_value=3.0)


class CurveRequestSerializer(PointsRequestSerializer):
    method = serializers.ChoiceField(
        choices=[m.value for m in EquityMethod] + ['live'], default=EquityMethod.LINEAR.value,
    )
    n_points = serializers.IntegerField(default=101, min_value=2, max_value=100001)

    def volatility_optional(self, attrs) -> bool:
        # Live curves ignore volatility.
        return attrs.get('method') == 'live'


class ImpliedIndexRequestSerializer(serializers.Serializer):
    alpha = serializers.FloatField(default=0.10, min_value=0.0, max_value=MAX_VOLATILITY)
    w_values = FloatListField(default=list(DEFAULT_TABLE_VALUES), min_length=1)
    l_values = FloatListField(default=list(DEFAULT_TABLE_VALUES), min_length=1)
    alphas = FloatListField(required=False, min_length=1)

    def validate(self, attrs):
        for key in ('w_values', 'l_values'):
            bad = [v for v in attrs[key] if not (1.0 <= v <= 3.0)]
            if bad:
                raise serializers.ValidationError({key: f"Values must lie in [1, 3]: {bad}"})
        bad = [a for a in attrs.get('alphas', []) if not (0.0 <= a < MAX_VOLATILITY)]
        if bad:
            raise serializers.ValidationError({'alphas': f"Values must lie in [0, {MAX_VOLATILITY}): {bad}"})
        return attrs


class AdviceRequestSerializer(SolverInputSerializer):
    p = serializers.FloatField(min_value=0.0, max_value=1.0)
    gammon_win = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    backgammon_win = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    gammon_loss = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    backgammon_loss = serializers.FloatField(default=0.0, min_value=0.0, max_value=1.0)
    cube = serializers.ChoiceField(choices=list(CUBE_CHOICES), default='centered')
    cube_value = serializers.IntegerField(default=1, min_value=1)

    def validate_p(self, value):
        if value <= 0.0 or value >= 1.0:
            raise serializers.ValidationError("Win probability must lie strictly between 0 and 1")
        return value

    def validate(self, attrs):
        attrs = super().validate(attrs)
        try:
            attrs['gammons'] = GammonProbs(
                p_win=attrs['p'],
                p_gammon_win=attrs['gammon_win'],
                p_backgammon_win=attrs['backgammon_win'],
                p_gammon_loss=attrs['gammon_loss'],
                p_backgammon_loss=attrs['backgammon_loss'],
            )
            attrs['cube_state'] = CubeState(CUBE_CHOICES[attrs['cube']], attrs['cube_value'])
        except CubeModelError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs


# ===== Responses =====

class DecisionPointsSerializer(serializers.Serializer):
    tg_u = serializers.FloatField()
    tp = serializers.FloatField()
    rd_u = serializers.FloatField()
    rd_o = serializers.FloatField()
    cp = serializers.FloatField()
    tg_o = serializers.FloatField()
    tgc_u = serializers.FloatField()
    id_u = serializers.FloatField()
    id_o = serializers.FloatField()
    tgc_o = serializers.FloatField()
    clamped = serializers.ListField(child=serializers.CharField())


class CubeAdviceSerializer(serializers.Serializer):
    decision = serializers.CharField()
    doubler = serializers.CharField(source='doubler.value')
    doubler_action = serializers.CharField(source='doubler_action.value')
    taker_action = serializers.CharField(source='taker_action.value')
    method = serializers.CharField(source='method.value')
    p_win = serializers.FloatField()
    cube = serializers.CharField(source='cube.kind.value')
    cube_value = serializers.IntegerField(source='cube.value')
    no_double_equity = serializers.FloatField()
    double_take_equity = serializers.FloatField()
    double_pass_equity = serializers.FloatField()
    double_equity = serializers.FloatField()
    points_used = DecisionPointsSerializer()

