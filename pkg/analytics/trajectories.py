# analytics/trajectories.py - Trajectory CSV import/export (game_id,ply,p_win)

import csv
import io
import logging
from collections import OrderedDict
from typing import Dict, Iterable, TextIO

import numpy as np

from core.exceptions import InvalidParameterError

from .sim import Trajectory

logger = logging.getLogger(__name__)

TRAJECTORY_HEADER = ('game_id', 'ply', 'p_win')


def write_trajectories(trajectories: Iterable[Trajectory], stream: TextIO) -> int:
    """One row per ply; returns the number of rows written."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(TRAJECTORY_HEADER)
    rows = 0
    for traj in trajectories:
        for ply, p in enumerate(traj.p_values):
            writer.writerow([traj.game_id, ply, repr(float(p))])
            rows += 1
    return rows


def trajectories_to_csv(trajectories: Iterable[Trajectory]) -> str:
    buffer = io.StringIO()
    write_trajectories(trajectories, buffer)
    return buffer.getvalue()


def read_trajectories(stream: TextIO) -> Dict[int, np.ndarray]:
    """
    Parse trajectory CSV into P sequences keyed by game id, in file order.

    Rows of a game must be contiguous with plies 0, 1, 2, ...
    """
    reader = csv.DictReader(stream)
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != TRAJECTORY_HEADER:
        raise InvalidParameterError(f"Trajectory CSV header must be {','.join(TRAJECTORY_HEADER)}")

    games: Dict[int, list] = OrderedDict()
    for line_no, row in enumerate(reader, start=2):
        try:
            game_id = int(row['game_id'])
            ply = int(row['ply'])
            p = float(row['p_win'])
        except (TypeError, ValueError) as exc:
            raise InvalidParameterError(f"Line {line_no}: malformed row {row!r}") from exc
        if not 0.0 <= p <= 1.0:
            raise InvalidParameterError(f"Line {line_no}: p_win {p} outside [0, 1]")
        path = games.setdefault(game_id, [])
        if ply != len(path):
            raise InvalidParameterError(f"Line {line_no}: game {game_id} expected ply {len(path)}, got {ply}")
        path.append(p)

    logger.info(f"Read {len(games)} trajectories")
    return OrderedDict((game_id, np.asarray(path)) for game_id, path in games.items())


def read_trajectories_file(path: str) -> Dict[int, np.ndarray]:
    with open(path, newline='') as fh:
        return read_trajectories(fh)
