"""Reference Bhikar-Sawkar engine.

A game is a small state machine that advances one card per :func:`step`
and reports what happened as :class:`TurnEvent` values. This module is the
readable, event-emitting route used for traces and for checking the
compiled kernel in :mod:`bhikar_sawkar.fastpath`; bulk simulation goes
through the kernel.

Elimination is checked when the rotation reaches a player: someone who
has just played their last card stays in the game until the turn comes
back round to them with an empty deck.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, Union

from .randomness import RandomStream, shuffle

CARDS_PER_DECK = 52
NUM_RANKS = 13
DEFAULT_TURN_CAP = 10_000_000


class InvalidConfigError(ValueError):
    """Raised for game or sweep parameters outside their valid range."""


class Rank(enum.IntEnum):
    """Card rank; suits play no part in matching and are not modelled."""

    TWO = 0
    THREE = 1
    FOUR = 2
    FIVE = 3
    SIX = 4
    SEVEN = 5
    EIGHT = 6
    NINE = 7
    TEN = 8
    JACK = 9
    QUEEN = 10
    KING = 11
    ACE = 12

    @property
    def label(self) -> str:
        return "23456789TJQKA"[self.value]


@dataclass(frozen=True)
class GameConfig:
    players: int
    decks: int
    turn_cap: int = DEFAULT_TURN_CAP

    def __post_init__(self) -> None:
        if self.players < 2:
            raise InvalidConfigError(f"need at least 2 players, got {self.players}")
        if self.decks < 1:
            raise InvalidConfigError(f"need at least 1 deck, got {self.decks}")
        if self.turn_cap <= 0:
            raise InvalidConfigError(f"turn_cap must be positive, got {self.turn_cap}")
        if self.players > self.total_cards():
            raise InvalidConfigError(
                f"{self.players} players cannot each be dealt a card from {self.total_cards()}"
            )

    def total_cards(self) -> int:
        return CARDS_PER_DECK * self.decks


class PlayerDeck:
    """Private face-down deck: draw from the top, won piles go underneath."""

    __slots__ = ("cards",)

    def __init__(self, cards: Iterable[int] = ()):
        self.cards: deque[int] = deque(cards)

    def draw(self) -> int:
        return self.cards.popleft()

    def append_bottom(self, cards: Iterable[int]) -> None:
        self.cards.extend(cards)

    def __len__(self) -> int:
        return len(self.cards)

    def __iter__(self):
        return iter(self.cards)

    def __repr__(self) -> str:
        return f"PlayerDeck({list(self.cards)!r})"


class Status(enum.Enum):
    RUNNING = "running"
    FINISHED = "finished"
    ABORTED = "aborted"


@dataclass(frozen=True)
class CardPlayed:
    player: int
    rank: int
    turn: int


@dataclass(frozen=True)
class HandWon:
    player: int
    pile_size: int
    turn: int


@dataclass(frozen=True)
class PlayerEliminated:
    player: int
    turn: int


@dataclass(frozen=True)
class GameEnded:
    winner: int
    total_turns: int


TurnEvent = Union[CardPlayed, HandWon, PlayerEliminated, GameEnded]
EventSink = Callable[[TurnEvent], None]


@dataclass
class GameState:
    config: GameConfig
    decks: list[PlayerDeck]
    pile: list[int] = field(default_factory=list)
    current: int = 0
    eliminated: list[bool] = field(default_factory=list)
    turns: int = 0
    status: Status = Status.RUNNING
    winner: int | None = None
    n_cards: int = 0

    def __post_init__(self) -> None:
        if not self.eliminated:
            self.eliminated = [False] * len(self.decks)
        if not self.n_cards:
            self.n_cards = sum(len(d) for d in self.decks) + len(self.pile)

    def cards_in_play(self) -> int:
        return sum(len(d) for d in self.decks) + len(self.pile)

    def alive(self) -> list[int]:
        return [p for p, out in enumerate(self.eliminated) if not out]


@dataclass
class GameResult:
    config: GameConfig
    total_turns: int
    winner: int | None
    hand_wins: list[int]
    hand_sizes: list[int]
    terminated: bool = True


def build_shoe(decks: int) -> list[Rank]:
    """Unshuffled shoe: ``decks`` full packs, each rank ``4 * decks`` times."""
    if decks < 1:
        raise InvalidConfigError(f"need at least 1 deck, got {decks}")
    return [rank for _ in range(decks) for _suit in range(4) for rank in Rank]


def deal(shoe: Sequence[int], players: int) -> list[PlayerDeck]:
    """Deal round robin from player 0; position ``i`` goes to ``i % players``."""
    if players < 2:
        raise InvalidConfigError(f"need at least 2 players, got {players}")
    return [PlayerDeck(shoe[p::players]) for p in range(players)]


def new_game(
    config: GameConfig,
    rng: RandomStream,
    shoe: Sequence[int] | None = None,
    *,
    shuffle_shoe: bool = True,
) -> GameState:
    """Shuffle and deal a fresh game.

    ``shoe`` replaces the standard ``build_shoe(config.decks)`` composition;
    with ``shuffle_shoe=False`` it is dealt in the given order (used to set
    up hand-traced positions).
    """
    cards = list(build_shoe(config.decks) if shoe is None else shoe)
    if len(cards) < config.players:
        raise InvalidConfigError("shoe is too small to give every player a card")
    if shuffle_shoe:
        shuffle(cards, rng)
    return GameState(config=config, decks=deal(cards, config.players), n_cards=len(cards))


def step(state: GameState, rng: RandomStream) -> list[TurnEvent]:
    """Play one card and resolve its consequences."""
    if state.status is not Status.RUNNING:
        raise RuntimeError(f"game is not running ({state.status.value})")
    if state.turns >= state.config.turn_cap:
        state.status = Status.ABORTED
        return []

    player = state.current
    deck = state.decks[player]
    card = deck.draw()
    pile = state.pile
    pile.append(card)
    state.turns += 1
    events: list[TurnEvent] = [CardPlayed(player, int(card), state.turns)]

    if len(pile) >= 2 and pile[-2] == card:
        shuffle(pile, rng)
        deck.append_bottom(pile)
        events.append(HandWon(player, len(pile), state.turns))
        state.pile = []
        return events

    n = len(state.decks)
    alive = n - sum(state.eliminated)
    p = player
    while True:
        p = (p + 1) % n
        if state.eliminated[p]:
            continue
        if len(state.decks[p]) == 0:
            state.eliminated[p] = True
            alive -= 1
            events.append(PlayerEliminated(p, state.turns))
            if alive == 1:
                winner = state.eliminated.index(False)
                state.status = Status.FINISHED
                state.winner = winner
                events.append(GameEnded(winner, state.turns))
                return events
            continue
        break
    state.current = p
    return events


def play_out(
    state: GameState, rng: RandomStream, observer: EventSink | None = None
) -> GameResult:
    """Step ``state`` until it finishes or hits the turn cap."""
    n = len(state.decks)
    hand_wins = [0] * n
    hand_sizes: list[int] = []
    while state.status is Status.RUNNING:
        for event in step(state, rng):
            if isinstance(event, HandWon):
                hand_wins[event.player] += 1
                hand_sizes.append(event.pile_size)
            if observer is not None:
                observer(event)
    return GameResult(
        config=state.config,
        total_turns=state.turns,
        winner=state.winner,
        hand_wins=hand_wins,
        hand_sizes=hand_sizes,
        terminated=state.status is Status.FINISHED,
    )


def run_game(
    config: GameConfig,
    rng: RandomStream,
    observer: EventSink | None = None,
    *,
    shoe: Sequence[int] | None = None,
    shuffle_shoe: bool = True,
) -> GameResult:
    """Deal and play one complete game, streaming events to ``observer``."""
    state = new_game(config, rng, shoe, shuffle_shoe=shuffle_shoe)
    return play_out(state, rng, observer)
