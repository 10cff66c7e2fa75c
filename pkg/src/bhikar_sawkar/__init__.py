"""Monte Carlo engine and experiment harness for the Bhikar-Sawkar card game."""

from .engine import (
    CardPlayed,
    GameConfig,
    GameEnded,
    GameResult,
    GameState,
    HandWon,
    InvalidConfigError,
    PlayerEliminated,
    Rank,
    Status,
    build_shoe,
    deal,
    new_game,
    run_game,
    step,
)
from .randomness import GENERATOR_NAME, RandomStream, SeedPlan, shuffle, stream_for
from .stats import ConfigAccumulator, ConfigReport, Histogram, finalize, merge, record
from .sweep import SweepSpec, cell_index, run_sweep, simulate_cell

__version__ = "0.1.0"

__all__ = [
    "CardPlayed",
    "ConfigAccumulator",
    "ConfigReport",
    "GENERATOR_NAME",
    "GameConfig",
    "GameEnded",
    "GameResult",
    "GameState",
    "HandWon",
    "Histogram",
    "InvalidConfigError",
    "PlayerEliminated",
    "RandomStream",
    "Rank",
    "SeedPlan",
    "Status",
    "SweepSpec",
    "build_shoe",
    "cell_index",
    "deal",
    "finalize",
    "merge",
    "new_game",
    "record",
    "run_game",
    "run_sweep",
    "shuffle",
    "simulate_cell",
    "step",
    "stream_for",
]
