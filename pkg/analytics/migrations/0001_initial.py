# Generated by Django 5.1.6 on 2026-10-18 10:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='DuelRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('w', models.FloatField()),
                ('l', models.FloatField()),
                ('jump_kind', models.CharField(max_length=32)),
                ('alpha_ply', models.FloatField()),
                ('cube_cap', models.PositiveIntegerField(default=64)),
                ('max_plies', models.PositiveIntegerField(default=5000)),
                ('config', models.JSONField(default=dict)),
                ('strategy_a', models.JSONField(default=dict)),
                ('strategy_b', models.JSONField(default=dict)),
                ('games', models.PositiveIntegerField()),
                ('seed', models.BigIntegerField()),
                ('mean_ppg', models.FloatField()),
                ('stderr_ppg', models.FloatField(blank=True, null=True)),
                ('absorbed', models.PositiveIntegerField(default=0)),
                ('passed', models.PositiveIntegerField(default=0)),
                ('truncated', models.PositiveIntegerField(default=0)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
