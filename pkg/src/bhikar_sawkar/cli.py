"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 at least one game
hit the turn cap.
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from pathlib import Path

from .engine import (
    DEFAULT_TURN_CAP,
    CardPlayed,
    GameConfig,
    GameEnded,
    HandWon,
    InvalidConfigError,
    PlayerEliminated,
    Rank,
    run_game,
)
from .output import cell_dirname, metadata, write_bundle, write_grid_summary
from .randomness import MASK64, stream_for
from .stats import HAND_BIN_WIDTH, TURN_BIN_WIDTH, finalize
from .sweep import DEFAULT_DECKS, DEFAULT_PLAYERS, Progress, SweepSpec, cell_index, run_sweep, simulate_cell

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_ABORTED = 3

log = logging.getLogger("bhikar_sawkar")


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= MASK64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit word")
    return value


def _add_seed_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--seed", type=_seed, default=0, help="master seed (default 0)")
    group.add_argument(
        "--entropy-seed",
        action="store_true",
        help="draw the master seed from the OS; the chosen value is written to the metadata",
    )


def _resolve_seed(args) -> tuple[int, str]:
    if args.entropy_seed:
        seed = secrets.randbits(64)
        print(f"master seed: {seed}", file=sys.stderr)
        return seed, "os-entropy"
    return args.seed, "argument"


def _event_record(event) -> dict:
    if isinstance(event, CardPlayed):
        return {"event": "card_played", "player": event.player, "rank": event.rank, "turn": event.turn}
    if isinstance(event, HandWon):
        return {"event": "hand_won", "player": event.player, "pile_size": event.pile_size, "turn": event.turn}
    if isinstance(event, PlayerEliminated):
        return {"event": "player_eliminated", "player": event.player, "turn": event.turn}
    return {"event": "game_ended", "winner": event.winner, "total_turns": event.total_turns}


def _event_text(event) -> str:
    if isinstance(event, CardPlayed):
        return f"turn {event.turn}: player {event.player} plays {Rank(event.rank).label}"
    if isinstance(event, HandWon):
        return f"turn {event.turn}: player {event.player} wins a hand of {event.pile_size} cards"
    if isinstance(event, PlayerEliminated):
        return f"turn {event.turn}: player {event.player} is eliminated"
    assert isinstance(event, GameEnded)
    return f"game over: player {event.winner} wins after {event.total_turns} turns"


def cmd_trace(args) -> int:
    config = GameConfig(args.players, args.decks, args.turn_cap)
    seed, _ = _resolve_seed(args)
    out = sys.stdout
    if args.format == "jsonl":
        def emit(event):
            out.write(json.dumps(_event_record(event), separators=(",", ":")) + "\n")
    else:
        def emit(event):
            out.write(_event_text(event) + "\n")
    result = run_game(config, stream_for(seed, 0, args.game), emit)
    out.flush()
    if not result.terminated:
        print(f"game aborted after {result.total_turns} turns (turn cap)", file=sys.stderr)
        return EXIT_ABORTED
    return EXIT_OK


def _progress_logger(p: Progress) -> None:
    # roughly ten lines per cell
    step = max(1, p.games_total // 10)
    if p.games_done == p.games_total or p.games_done % step < 2_000:
        log.info("N=%d K=%d: %d/%d games (%.1fs)", *p.cell, p.games_done, p.games_total, p.elapsed)


def cmd_simulate(args) -> int:
    config = GameConfig(args.players, args.decks, args.turn_cap)
    seed, source = _resolve_seed(args)
    acc = simulate_cell(
        config,
        args.games,
        seed,
        0,
        workers=args.workers,
        turn_bin_width=args.turn_bin_width,
        hand_bin_width=args.hand_bin_width,
        progress=_progress_logger,
    )
    report = finalize(acc)
    write_bundle(Path(args.out), report, metadata(seed, source, config_id=0))
    if acc.aborted:
        print(f"{acc.aborted} game(s) aborted at the turn cap", file=sys.stderr)
        return EXIT_ABORTED
    return EXIT_OK


def cmd_sweep(args) -> int:
    seed, source = _resolve_seed(args)
    spec = SweepSpec(
        player_counts=args.players,
        deck_counts=args.decks,
        games_per_config=args.games,
        master_seed=seed,
        workers=args.workers,
        turn_cap=args.turn_cap,
        turn_bin_width=args.turn_bin_width,
        hand_bin_width=args.hand_bin_width,
    )
    reports = run_sweep(spec, progress=_progress_logger)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for (n, k), report in reports.items():
        meta = metadata(seed, source, config_id=cell_index((n, k), spec))
        write_bundle(out / cell_dirname(n, k), report, meta)
    write_grid_summary(out / "grid_summary.csv", reports)
    with open(out / "metadata.json", "w") as fh:
        meta = metadata(
            seed,
            source,
            players=list(spec.player_counts),
            decks=list(spec.deck_counts),
            games_per_config=spec.games_per_config,
            turn_cap=spec.turn_cap,
        )
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    aborted = sum(r.aborted for r in reports.values())
    if aborted:
        print(f"{aborted} game(s) aborted at the turn cap", file=sys.stderr)
        return EXIT_ABORTED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bhikar-sawkar", description="Monte Carlo simulation of the Bhikar-Sawkar card game."
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    trace = sub.add_parser("trace", help="print the event log of one game")
    trace.add_argument("--players", type=_positive, required=True)
    trace.add_argument("--decks", type=_positive, required=True)
    trace.add_argument("--game", type=int, default=0, help="game index within the seed's stream family")
    trace.add_argument("--format", choices=("text", "jsonl"), default="text")
    trace.add_argument("--turn-cap", type=_positive, default=DEFAULT_TURN_CAP)
    _add_seed_args(trace)
    trace.set_defaults(func=cmd_trace)

    def add_run_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--games", type=_positive, required=True)
        p.add_argument("--workers", type=_positive, default=1)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--turn-bin-width", type=_positive, default=TURN_BIN_WIDTH)
        p.add_argument("--hand-bin-width", type=_positive, default=HAND_BIN_WIDTH)
        p.add_argument("--turn-cap", type=_positive, default=DEFAULT_TURN_CAP)
        _add_seed_args(p)

    simulate = sub.add_parser("simulate", help="simulate one (players, decks) configuration")
    simulate.add_argument("--players", type=_positive, required=True)
    simulate.add_argument("--decks", type=_positive, required=True)
    add_run_args(simulate)
    simulate.set_defaults(func=cmd_simulate)

    sweep = sub.add_parser("sweep", help="simulate every (players, decks) cell of a grid")
    sweep.add_argument("--players", type=_positive, nargs="+", default=list(DEFAULT_PLAYERS))
    sweep.add_argument("--decks", type=_positive, nargs="+", default=list(DEFAULT_DECKS))
    add_run_args(sweep)
    sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except InvalidConfigError as exc:
        parser.error(str(exc))
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
