# analytics/models.py - Stored duel results

from django.db import models


class DuelRecord(models.Model):
    """One finished duel: process configuration, both strategies and the score for side A."""

    created_at = models.DateTimeField(auto_now_add=True)

    # Process
    w = models.FloatField()
    l = models.FloatField()
    jump_kind = models.CharField(max_length=32)
    alpha_ply = models.FloatField()
    cube_cap = models.PositiveIntegerField(default=64)
    max_plies = models.PositiveIntegerField(default=5000)
    config = models.JSONField(default=dict)

    # Players
    strategy_a = models.JSONField(default=dict)
    strategy_b = models.JSONField(default=dict)

    # Result
    games = models.PositiveIntegerField()
    seed = models.BigIntegerField()
    mean_ppg = models.FloatField()
    stderr_ppg = models.FloatField(null=True, blank=True)
    absorbed = models.PositiveIntegerField(default=0)
    passed = models.PositiveIntegerField(default=0)
    truncated = models.PositiveIntegerField(default=0)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"Duel #{self.pk}: {self.mean_ppg:+.4f} ppg over {self.games} games"

    @classmethod
    def from_result(cls, cfg, a, b, result) -> 'DuelRecord':
        data = result.to_dict()
        return cls(
            w=cfg.w,
            l=cfg.l,
            jump_kind=cfg.jump_kind,
            alpha_ply=cfg.alpha_ply,
            cube_cap=cfg.cube_cap,
            max_plies=cfg.max_plies,
            config=cfg.to_dict(),
            strategy_a=a.to_dict(),
            strategy_b=b.to_dict(),
            games=result.games,
            seed=result.seed,
            mean_ppg=result.mean_ppg,
            stderr_ppg=data['stderr_ppg'],
            absorbed=result.absorbed,
            passed=result.passed,
            truncated=result.truncated,
        )
