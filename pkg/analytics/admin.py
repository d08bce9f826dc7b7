from django.contrib import admin

from .models import DuelRecord


@admin.register(DuelRecord)
class DuelRecordAdmin(admin.ModelAdmin):
    list_display = ('id', 'created_at', 'w', 'l', 'alpha_ply', 'games', 'mean_ppg', 'stderr_ppg', 'truncated')
    list_filter = ('jump_kind', 'created_at')
    readonly_fields = ('created_at', 'config', 'strategy_a', 'strategy_b')
