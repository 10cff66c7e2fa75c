"""Serialization of reports to figure-ready CSV and JSON files.

Nothing time- or machine-dependent is written, so reruns with the same
arguments produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping

from .randomness import GENERATOR_NAME, SEED_DERIVATION
from .stats import ConfigReport, Histogram

GRID_ORDERING = "row-major over sorted players (outer) x sorted decks (inner)"
HIST_HEADER = ("bin_start", "bin_end", "count", "probability")


def metadata(master_seed: int, seed_source: str = "argument", **extra) -> dict:
    from . import __version__

    meta = {
        "tool": "bhikar_sawkar",
        "version": __version__,
        "generator": GENERATOR_NAME,
        "seed_derivation": SEED_DERIVATION,
        "master_seed": master_seed,
        "seed_source": seed_source,
        "grid_ordering": GRID_ORDERING,
        "player_index_base": 0,
    }
    meta.update(extra)
    return meta


def summary_dict(report: ConfigReport, meta: Mapping) -> dict:
    acc = report.accumulator
    mean = report.mean_turns
    return {
        "metadata": dict(meta),
        "config": {
            "players": acc.config.players,
            "decks": acc.config.decks,
            "turn_cap": acc.config.turn_cap,
        },
        "games": acc.games,
        "aborted": acc.aborted,
        "terminated": acc.terminated,
        "min_turns": acc.min_turns,
        "max_turns": acc.max_turns,
        "total_turns_sum": acc.total_turns_sum,
        "mean_turns": float(mean),
        "mean_turns_exact": f"{mean.numerator}/{mean.denominator}",
        "turn_bin_width": acc.turn_bin_width,
        "hand_bin_width": acc.hand_bin_width,
        "total_hands": acc.total_hands,
        "hand_wins": list(acc.hand_wins),
        "hand_win_probability": list(report.hand_win_pdf),
        "game_wins": list(acc.game_wins),
        "game_win_probability": list(report.game_win_pdf),
    }


def write_histogram(path: Path, hist: Histogram) -> None:
    total = hist.total
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(HIST_HEADER)
        for start, end, count in hist.rows():
            writer.writerow((start, end, count, repr(count / total) if total else "0.0"))


def write_bundle(out_dir: Path, report: ConfigReport, meta: Mapping) -> None:
    """Write ``summary.json``, ``turns_hist.csv`` and ``hand_sizes_hist.csv``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary_dict(report, meta), fh, indent=2)
        fh.write("\n")
    write_histogram(out_dir / "turns_hist.csv", report.turn_hist)
    write_histogram(out_dir / "hand_sizes_hist.csv", report.hand_size_hist)


def cell_dirname(players: int, decks: int) -> str:
    return f"N{players}_K{decks}"


def write_grid_summary(path: Path, reports: Mapping[tuple[int, int], ConfigReport]) -> None:
    width = max(n for n, _ in reports)
    header = ["players", "decks", "games", "min_turns", "max_turns", "mean_turns", "aborts"]
    header += [f"game_win_p{i}" for i in range(width)]
    header += [f"hand_win_p{i}" for i in range(width)]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for (n, k), rep in reports.items():
            pad = [""] * (width - n)
            writer.writerow(
                [n, k, rep.games, rep.min_turns, rep.max_turns, repr(float(rep.mean_turns)), rep.aborted]
                + [repr(p) for p in rep.game_win_pdf] + pad
                + [repr(p) for p in rep.hand_win_pdf] + pad
            )
