"""Compiled batch kernel for bulk simulation.

Plays games with the same rules, RNG and draw order as
:mod:`bhikar_sawkar.engine`, but without events, accumulating statistics
into flat integer arrays. Functions are ``nogil`` so a thread pool can run
batches concurrently.
"""

from __future__ import annotations

import numba as nb
import numpy as np

_U = np.uint64
_GOLDEN = _U(0x9E3779B97F4A7C15)
_M1 = _U(0xBF58476D1CE4E5B9)
_M2 = _U(0x94D049BB133111EB)
_CONFIG_MULT = _U(0xD1B54A32D192ED03)
_GAME_MULT = _U(0x8CB92BA72F3D8DD7)
_CONFIG_SALT = _U(0x6A09E667F3BCC909)
_GAME_SALT = _U(0xBB67AE8584CAA73B)
_S7 = _U(7)
_S17 = _U(17)
_S27 = _U(27)
_S30 = _U(30)
_S31 = _U(31)
_S45 = _U(45)
_S57 = _U(57)
_S19 = _U(19)
_FIVE = _U(5)
_NINE = _U(9)
_ZERO = _U(0)

_jit = nb.njit(nogil=True, cache=True)


@_jit
def _mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@_jit
def derive_seed(master_seed, config_id, game_index):
    h = _mix64(master_seed ^ _GOLDEN)
    h = _mix64(h + config_id * _CONFIG_MULT + _CONFIG_SALT)
    h = _mix64(h + game_index * _GAME_MULT + _GAME_SALT)
    return h


@_jit
def seed_into(state, seed):
    x = seed
    for i in range(4):
        x = x + _GOLDEN
        state[i] = _mix64(x)
    if state[0] == _ZERO and state[1] == _ZERO and state[2] == _ZERO and state[3] == _ZERO:
        state[0] = _GOLDEN


@_jit
def next_u64(s):
    x = s[1] * _FIVE
    result = ((x << _S7) | (x >> _S57)) * _NINE
    t = s[1] << _S17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = (s[3] << _S45) | (s[3] >> _S19)
    return result


@_jit
def bounded_uniform(s, n):
    bound = _U(n)
    threshold = (_ZERO - bound) % bound
    while True:
        x = next_u64(s)
        if x >= threshold:
            return np.int64(x % bound)


@_jit
def shuffle_prefix(arr, length, s):
    for i in range(length - 1, 0, -1):
        j = bounded_uniform(s, i + 1)
        tmp = arr[i]
        arr[i] = arr[j]
        arr[j] = tmp


@_jit
def _grow(hist, index):
    size = hist.shape[0]
    while size <= index:
        size *= 2
    out = np.zeros(size, dtype=np.int64)
    out[: hist.shape[0]] = hist
    return out


@_jit
def play_game(shoe, players, turn_cap, rng, decks, heads, lens, eliminated, pile,
              hand_wins, hand_hist, hand_width):
    """Play one game in the caller's scratch buffers.

    ``hand_wins`` and ``hand_hist`` are incremented in place. Returns
    ``(turns, winner, terminated)``; ``winner`` is -1 for an aborted game.
    """
    n_cards = shoe.shape[0]
    for i in range(n_cards):
        pile[i] = shoe[i]
    shuffle_prefix(pile, n_cards, rng)
    for p in range(players):
        heads[p] = 0
        lens[p] = 0
        eliminated[p] = False
    for i in range(n_cards):
        p = i % players
        decks[p, lens[p]] = pile[i]
        lens[p] += 1

    pile_len = 0
    alive = players
    current = 0
    turns = 0
    while True:
        if turns >= turn_cap:
            return turns, -1, False
        h = heads[current]
        card = decks[current, h]
        h += 1
        if h == n_cards:
            h = 0
        heads[current] = h
        lens[current] -= 1
        pile[pile_len] = card
        pile_len += 1
        turns += 1

        if pile_len >= 2 and pile[pile_len - 2] == card:
            shuffle_prefix(pile, pile_len, rng)
            tail = heads[current] + lens[current]
            for j in range(pile_len):
                pos = tail + j
                if pos >= n_cards:
                    pos -= n_cards
                decks[current, pos] = pile[j]
            lens[current] += pile_len
            hand_wins[current] += 1
            hand_hist[pile_len // hand_width] += 1
            pile_len = 0
            continue

        p = current
        while True:
            p += 1
            if p == players:
                p = 0
            if eliminated[p]:
                continue
            if lens[p] == 0:
                eliminated[p] = True
                alive -= 1
                if alive == 1:
                    for q in range(players):
                        if not eliminated[q]:
                            return turns, q, True
                continue
            break
        current = p


@_jit
def run_batch(shoe, players, turn_cap, master_seed, config_id, start, stop,
              turn_width, hand_width):
    """Play games ``start <= g < stop`` of one cell and return raw counters.

    Returns ``(games, aborted, min_turns, max_turns, turn_sum, turn_hist,
    hand_hist, hand_wins, game_wins)``; min/max/sum/turn_hist cover
    terminated games only.
    """
    n_cards = shoe.shape[0]
    rng = np.empty(4, dtype=np.uint64)
    decks = np.empty((players, n_cards), dtype=shoe.dtype)
    heads = np.empty(players, dtype=np.int64)
    lens = np.empty(players, dtype=np.int64)
    eliminated = np.empty(players, dtype=np.bool_)
    pile = np.empty(n_cards, dtype=shoe.dtype)
    hand_hist = np.zeros(n_cards // hand_width + 1, dtype=np.int64)
    turn_hist = np.zeros(64, dtype=np.int64)
    hand_wins = np.zeros(players, dtype=np.int64)
    game_wins = np.zeros(players, dtype=np.int64)
    game_hands = np.zeros(players, dtype=np.int64)
    game_hand_hist = np.zeros(n_cards // hand_width + 1, dtype=np.int64)

    games = 0
    aborted = 0
    min_turns = np.int64(-1)
    max_turns = np.int64(-1)
    turn_sum = np.int64(0)
    master = _U(master_seed)
    cid = _U(config_id)
    for g in range(start, stop):
        seed_into(rng, derive_seed(master, cid, _U(g)))
        game_hands[:] = 0
        game_hand_hist[:] = 0
        turns, winner, terminated = play_game(
            shoe, players, turn_cap, rng, decks, heads, lens, eliminated, pile,
            game_hands, game_hand_hist, hand_width,
        )
        games += 1
        if not terminated:
            aborted += 1
            continue
        hand_wins += game_hands
        hand_hist += game_hand_hist
        game_wins[winner] += 1
        turn_sum += turns
        if min_turns < 0 or turns < min_turns:
            min_turns = turns
        if turns > max_turns:
            max_turns = turns
        b = turns // turn_width
        if b >= turn_hist.shape[0]:
            turn_hist = _grow(turn_hist, b)
        turn_hist[b] += 1

    top = 0
    for i in range(turn_hist.shape[0]):
        if turn_hist[i] != 0:
            top = i + 1
    return (games, aborted, min_turns, max_turns, turn_sum, turn_hist[:top].copy(),
            hand_hist, hand_wins, game_wins)


def play_single(shoe, players: int, turn_cap: int, seed: int, hand_width: int = 1):
    """One game from an explicit stream seed; for cross-checking the engine."""
    shoe = np.asarray(shoe, dtype=np.int8)
    n_cards = shoe.shape[0]
    rng = np.empty(4, dtype=np.uint64)
    seed_into(rng, np.uint64(seed))
    hand_wins = np.zeros(players, dtype=np.int64)
    hand_hist = np.zeros(n_cards // hand_width + 1, dtype=np.int64)
    turns, winner, terminated = play_game(
        shoe, players, turn_cap, rng,
        np.empty((players, n_cards), dtype=np.int8), np.empty(players, dtype=np.int64),
        np.empty(players, dtype=np.int64), np.empty(players, dtype=np.bool_),
        np.empty(n_cards, dtype=np.int8), hand_wins, hand_hist, hand_width,
    )
    return int(turns), int(winner), bool(terminated), hand_wins, hand_hist
