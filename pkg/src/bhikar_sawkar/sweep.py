"""Experiment grid runner.

Game ``g`` of cell ``c`` always uses ``stream_for(master_seed, c, g)``, so
the output depends only on the sweep settings, never on how games are scheduled
across workers.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import fastpath
from .engine import DEFAULT_TURN_CAP, GameConfig, InvalidConfigError, build_shoe, run_game
from .randomness import MASK64, stream_for
from .stats import HAND_BIN_WIDTH, TURN_BIN_WIDTH, ConfigAccumulator, ConfigReport, finalize

log = logging.getLogger(__name__)

DEFAULT_PLAYERS = (2, 3, 4, 5)
DEFAULT_DECKS = (1, 2, 3, 4, 5)
DEFAULT_GAMES = 1_000_000
CHUNK_GAMES = 2_000


@dataclass(frozen=True)
class Progress:
    cell: tuple[int, int]
    games_done: int
    games_total: int
    elapsed: float


ProgressSink = Callable[[Progress], None]


@dataclass(frozen=True)
class SweepSpec:
    player_counts: Sequence[int] = DEFAULT_PLAYERS
    deck_counts: Sequence[int] = DEFAULT_DECKS
    games_per_config: int = DEFAULT_GAMES
    master_seed: int = 0
    workers: int = 1
    turn_cap: int = DEFAULT_TURN_CAP
    turn_bin_width: int = TURN_BIN_WIDTH
    hand_bin_width: int = HAND_BIN_WIDTH
    chunk_games: int = field(default=CHUNK_GAMES, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "player_counts", tuple(sorted(set(self.player_counts))))
        object.__setattr__(self, "deck_counts", tuple(sorted(set(self.deck_counts))))
        if not self.player_counts or not self.deck_counts:
            raise InvalidConfigError("grid needs at least one player count and one deck count")
        if self.games_per_config < 1:
            raise InvalidConfigError("games_per_config must be at least 1")
        if self.workers < 1:
            raise InvalidConfigError("workers must be at least 1")
        if not 0 <= self.master_seed <= MASK64:
            raise InvalidConfigError("master_seed must fit in an unsigned 64-bit word")
        for n, k in self.cells():
            GameConfig(n, k, self.turn_cap)

    def cells(self) -> list[tuple[int, int]]:
        """Grid cells in seed-derivation order: row-major, players outermost."""
        return [(n, k) for n in self.player_counts for k in self.deck_counts]


def cell_index(cell: tuple[int, int], spec: SweepSpec) -> int:
    n, k = cell
    if n not in spec.player_counts or k not in spec.deck_counts:
        raise KeyError(f"cell (N={n}, K={k}) is not in the grid")
    return spec.player_counts.index(n) * len(spec.deck_counts) + spec.deck_counts.index(k)


def _shoe_array(config: GameConfig, shoe: Sequence[int] | None) -> np.ndarray:
    return np.asarray(build_shoe(config.decks) if shoe is None else shoe, dtype=np.int8)


def simulate_cell(
    config: GameConfig,
    games: int,
    master_seed: int,
    config_id: int = 0,
    *,
    workers: int = 1,
    turn_bin_width: int = TURN_BIN_WIDTH,
    hand_bin_width: int = HAND_BIN_WIDTH,
    shoe: Sequence[int] | None = None,
    chunk_games: int = CHUNK_GAMES,
    progress: ProgressSink | None = None,
) -> ConfigAccumulator:
    """Play ``games`` games of one configuration with the compiled kernel."""
    shoe_arr = _shoe_array(config, shoe)
    bounds = [(s, min(s + chunk_games, games)) for s in range(0, games, chunk_games)]
    cell = (config.players, config.decks)
    started = time.perf_counter()

    def batch(start: int, stop: int) -> ConfigAccumulator:
        raw = fastpath.run_batch(
            shoe_arr, config.players, config.turn_cap, np.uint64(master_seed),
            np.uint64(config_id), start, stop, turn_bin_width, hand_bin_width,
        )
        return ConfigAccumulator.from_counts(config, turn_bin_width, hand_bin_width, *raw)

    acc = ConfigAccumulator(config, turn_bin_width, hand_bin_width)

    def absorb(part: ConfigAccumulator) -> None:
        nonlocal acc
        acc = acc.merge(part)
        if progress is not None:
            progress(Progress(cell, acc.games, games, time.perf_counter() - started))

    if workers == 1:
        for start, stop in bounds:
            absorb(batch(start, stop))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(batch, start, stop) for start, stop in bounds]
            for fut in as_completed(futures):
                absorb(fut.result())
    if acc.aborted:
        log.warning("%d of %d games aborted at the turn cap for %s", acc.aborted, games, config)
    return acc


def simulate_cell_reference(
    config: GameConfig,
    games: int,
    master_seed: int,
    config_id: int = 0,
    *,
    turn_bin_width: int = TURN_BIN_WIDTH,
    hand_bin_width: int = HAND_BIN_WIDTH,
    shoe: Sequence[int] | None = None,
) -> ConfigAccumulator:
    """Same contract as :func:`simulate_cell`, played by the pure-Python engine."""
    acc = ConfigAccumulator(config, turn_bin_width, hand_bin_width)
    for g in range(games):
        acc.record(run_game(config, stream_for(master_seed, config_id, g), shoe=shoe))
    return acc


def run_sweep(spec: SweepSpec, progress: ProgressSink | None = None) -> dict[tuple[int, int], ConfigReport]:
    reports: dict[tuple[int, int], ConfigReport] = {}
    for cell in spec.cells():
        config = GameConfig(cell[0], cell[1], spec.turn_cap)
        log.info("simulating N=%d K=%d (%d games)", cell[0], cell[1], spec.games_per_config)
        acc = simulate_cell(
            config,
            spec.games_per_config,
            spec.master_seed,
            cell_index(cell, spec),
            workers=spec.workers,
            turn_bin_width=spec.turn_bin_width,
            hand_bin_width=spec.hand_bin_width,
            chunk_games=spec.chunk_games,
            progress=progress,
        )
        reports[cell] = finalize(acc)
    return reports
