# analytics/tasks.py - Celery Background Tasks for chunked duels

import logging
from typing import Dict

import numpy as np
from celery import shared_task

from core.exceptions import InvalidParameterError

from .sim import DuelResult, ProcessConfig, Strategy, play_range, strategy_from_dict, summarize

logger = logging.getLogger(__name__)


@shared_task
def run_duel_chunk(config: Dict, strategy_a: Dict, strategy_b: Dict, seed: int, start: int, stop: int) -> Dict:
    """
    Play games ``start`` .. ``stop - 1`` of a duel.
    Payloads are plain dicts so the task survives JSON serialization.
    """
    cfg = ProcessConfig.from_dict(config)
    points, ended = play_range(cfg, strategy_from_dict(strategy_a), strategy_from_dict(strategy_b), seed, start, stop)
    logger.info(f"Duel chunk [{start}, {stop}) done, seed {seed}")
    return {'start': start, 'points': points, 'ended_by': ended}


def chunk_bounds(n_games: int, chunks: int):
    edges = np.linspace(0, n_games, chunks + 1).round().astype(int)
    return [(int(lo), int(hi)) for lo, hi in zip(edges[:-1], edges[1:]) if hi > lo]


def chunked_duel(cfg: ProcessConfig, a: Strategy, b: Strategy, n_games: int, seed: int, chunks: int) -> DuelResult:
    """
    Dispatch a duel as ``chunks`` game ranges; the result matches the serial duel.
    With CELERY_TASK_ALWAYS_EAGER the chunks run in process.
    """
    if n_games < 1:
        raise InvalidParameterError(f"n_games must be at least 1, got {n_games}")
    if chunks < 1:
        raise InvalidParameterError(f"chunks must be at least 1, got {chunks}")

    config, payload_a, payload_b = cfg.to_dict(), a.to_dict(), b.to_dict()
    pending = [
        run_duel_chunk.delay(config, payload_a, payload_b, seed, lo, hi)
        for lo, hi in chunk_bounds(n_games, chunks)
    ]
    parts = sorted((job.get() for job in pending), key=lambda part: part['start'])

    points, ended = [], []
    for part in parts:
        points.extend(part['points'])
        ended.extend(part['ended_by'])
    logger.info(f"Chunked duel: {len(parts)} chunks, {n_games} games")
    return summarize(points, ended, seed)
