"""Mergeable per-cell statistics.

Everything is accumulated as exact integers so that sharded runs merge to
bit-identical results; probabilities are only formed in :func:`finalize`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .engine import GameConfig, GameResult

TURN_BIN_WIDTH = 100
HAND_BIN_WIDTH = 5


class StatsError(ValueError):
    pass


class ConfigMismatchError(StatsError):
    """Results or accumulators from different configurations were combined."""


class EmptyReportError(StatsError):
    pass


class Histogram:
    """Fixed-width integer histogram; bin ``b`` covers ``[b*w, (b+1)*w)``."""

    def __init__(self, bin_width: int, counts=None):
        if bin_width <= 0:
            raise StatsError(f"bin width must be positive, got {bin_width}")
        self.bin_width = int(bin_width)
        self.counts = np.zeros(0, dtype=np.int64) if counts is None else np.array(counts, dtype=np.int64)
        # trailing zero bins carry no information and would break equality
        nz = np.flatnonzero(self.counts)
        self.counts = self.counts[: nz[-1] + 1] if nz.size else self.counts[:0]

    def bin_of(self, value: int) -> int:
        if value < 0:
            raise StatsError(f"negative observation {value}")
        return value // self.bin_width

    def add(self, value: int, count: int = 1) -> None:
        b = self.bin_of(value)
        if b >= self.counts.size:
            grown = np.zeros(b + 1, dtype=np.int64)
            grown[: self.counts.size] = self.counts
            self.counts = grown
        self.counts[b] += count

    def count(self, bin_index: int) -> int:
        return int(self.counts[bin_index]) if 0 <= bin_index < self.counts.size else 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def merge(self, other: Histogram) -> Histogram:
        if other.bin_width != self.bin_width:
            raise ConfigMismatchError(
                f"bin widths differ: {self.bin_width} vs {other.bin_width}"
            )
        size = max(self.counts.size, other.counts.size)
        out = np.zeros(size, dtype=np.int64)
        out[: self.counts.size] += self.counts
        out[: other.counts.size] += other.counts
        return Histogram(self.bin_width, out)

    def rebin(self, width: int) -> Histogram:
        """Coarsen to ``width``, which must be a multiple of the current width."""
        if width % self.bin_width:
            raise StatsError(f"cannot rebin width {self.bin_width} to {width}")
        factor = width // self.bin_width
        padded = np.zeros(-(-self.counts.size // factor) * factor, dtype=np.int64)
        padded[: self.counts.size] = self.counts
        return Histogram(width, padded.reshape(-1, factor).sum(axis=1))

    def rows(self):
        """``(bin_start, bin_end, count)`` for every bin up to the last non-empty one."""
        w = self.bin_width
        return [(b * w, (b + 1) * w, int(c)) for b, c in enumerate(self.counts)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Histogram):
            return NotImplemented
        return self.bin_width == other.bin_width and np.array_equal(self.counts, other.counts)

    def __repr__(self) -> str:
        return f"Histogram(width={self.bin_width}, counts={self.counts.tolist()})"


@dataclass
class ConfigAccumulator:
    config: GameConfig
    turn_bin_width: int = TURN_BIN_WIDTH
    hand_bin_width: int = HAND_BIN_WIDTH
    games: int = 0
    aborted: int = 0
    min_turns: int | None = None
    max_turns: int | None = None
    total_turns_sum: int = 0
    turn_hist: Histogram = field(init=False)
    hand_size_hist: Histogram = field(init=False)
    hand_wins: list[int] = field(init=False)
    game_wins: list[int] = field(init=False)

    def __post_init__(self) -> None:
        self.turn_hist = Histogram(self.turn_bin_width)
        self.hand_size_hist = Histogram(self.hand_bin_width)
        self.hand_wins = [0] * self.config.players
        self.game_wins = [0] * self.config.players

    @property
    def total_hands(self) -> int:
        return sum(self.hand_wins)

    @property
    def terminated(self) -> int:
        return self.games - self.aborted

    def record(self, result: GameResult) -> ConfigAccumulator:
        if result.config != self.config:
            raise ConfigMismatchError(f"result for {result.config}, accumulator for {self.config}")
        self.games += 1
        if not result.terminated:
            self.aborted += 1
            return self
        t = result.total_turns
        self.min_turns = t if self.min_turns is None else min(self.min_turns, t)
        self.max_turns = t if self.max_turns is None else max(self.max_turns, t)
        self.total_turns_sum += t
        self.turn_hist.add(t)
        for size in result.hand_sizes:
            self.hand_size_hist.add(size)
        for p, wins in enumerate(result.hand_wins):
            self.hand_wins[p] += wins
        self.game_wins[result.winner] += 1
        return self

    def merge(self, other: ConfigAccumulator) -> ConfigAccumulator:
        if other.config != self.config:
            raise ConfigMismatchError(f"cannot merge {self.config} with {other.config}")
        out = ConfigAccumulator(self.config, self.turn_bin_width, self.hand_bin_width)
        out.turn_hist = self.turn_hist.merge(other.turn_hist)
        out.hand_size_hist = self.hand_size_hist.merge(other.hand_size_hist)
        out.games = self.games + other.games
        out.aborted = self.aborted + other.aborted
        out.min_turns = _opt(min, self.min_turns, other.min_turns)
        out.max_turns = _opt(max, self.max_turns, other.max_turns)
        out.total_turns_sum = self.total_turns_sum + other.total_turns_sum
        out.hand_wins = [a + b for a, b in zip(self.hand_wins, other.hand_wins)]
        out.game_wins = [a + b for a, b in zip(self.game_wins, other.game_wins)]
        return out

    @classmethod
    def from_counts(
        cls,
        config: GameConfig,
        turn_bin_width: int,
        hand_bin_width: int,
        games: int,
        aborted: int,
        min_turns: int,
        max_turns: int,
        turn_sum: int,
        turn_hist,
        hand_hist,
        hand_wins,
        game_wins,
    ) -> ConfigAccumulator:
        """Build from the raw counters returned by the compiled kernel."""
        acc = cls(config, turn_bin_width, hand_bin_width)
        acc.games = int(games)
        acc.aborted = int(aborted)
        if acc.terminated:
            acc.min_turns = int(min_turns)
            acc.max_turns = int(max_turns)
        acc.total_turns_sum = int(turn_sum)
        acc.turn_hist = Histogram(turn_bin_width, turn_hist)
        acc.hand_size_hist = Histogram(hand_bin_width, hand_hist)
        acc.hand_wins = [int(x) for x in hand_wins]
        acc.game_wins = [int(x) for x in game_wins]
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfigAccumulator):
            return NotImplemented
        return _fields(self) == _fields(other)


def _opt(fn, a, b):
    if a is None:
        return b
    if b is None:
        return a
    return fn(a, b)


def _fields(acc: ConfigAccumulator) -> tuple:
    return (
        acc.config, acc.games, acc.aborted, acc.min_turns, acc.max_turns,
        acc.total_turns_sum, acc.turn_hist, acc.hand_size_hist,
        tuple(acc.hand_wins), tuple(acc.game_wins),
    )


def record(acc: ConfigAccumulator, result: GameResult) -> ConfigAccumulator:
    return acc.record(result)


def merge(a: ConfigAccumulator, b: ConfigAccumulator) -> ConfigAccumulator:
    return a.merge(b)


@dataclass
class ConfigReport:
    """Finalized statistics for one (players, decks) cell.

    Counts are kept next to the probabilities so every derived number can be
    recomputed exactly. Distributions cover terminated games only; aborted
    games are reported by count.
    """

    accumulator: ConfigAccumulator
    mean_turns: Fraction
    hand_win_pdf: list[float]
    game_win_pdf: list[float]
    turn_pdf: list[float]
    hand_size_pdf: list[float]

    def __getattr__(self, name: str):
        # expose accumulator fields (games, min_turns, turn_hist, ...) directly
        if name == "accumulator":
            raise AttributeError(name)
        return getattr(self.accumulator, name)

    @property
    def config(self) -> GameConfig:
        return self.accumulator.config


def _pdf(counts, total: int) -> list[float]:
    if total == 0:
        return [0.0] * len(counts)
    return [int(c) / total for c in counts]


def finalize(acc: ConfigAccumulator) -> ConfigReport:
    if acc.games == 0:
        raise EmptyReportError(f"no games recorded for {acc.config}")
    if acc.terminated == 0:
        raise EmptyReportError(f"all {acc.games} games for {acc.config} aborted")
    finished = acc.terminated
    return ConfigReport(
        accumulator=acc,
        mean_turns=Fraction(acc.total_turns_sum, finished),
        hand_win_pdf=_pdf(acc.hand_wins, acc.total_hands),
        game_win_pdf=_pdf(acc.game_wins, finished),
        turn_pdf=_pdf(acc.turn_hist.counts, acc.turn_hist.total),
        hand_size_pdf=_pdf(acc.hand_size_hist.counts, acc.hand_size_hist.total),
    )
