"""Exact brute-force solver for tiny two-player games.

Written from the rules alone and sharing no code with the package: it
enumerates every deal and every pile reshuffle, builds the full Markov
chain over game positions, and solves it in exact rational arithmetic.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import permutations

# A position is (deck0, deck1, pile, current); decks and pile are tuples of
# ranks, deck top at index 0, newest pile card last. ("end", w) is a finished
# game won by w.


def initial_distribution(shoe):
    orders = list(permutations(shoe))
    dist = Counter((o[0::2], o[1::2], (), 0) for o in orders)
    return {s: Fraction(c, len(orders)) for s, c in dist.items()}


def transitions(pos):
    """Successors of a position after the current player plays one card."""
    deck0, deck1, pile, cur = pos
    decks = [deck0, deck1]
    card = decks[cur][0]
    decks[cur] = decks[cur][1:]
    new_pile = pile + (card,)

    if pile and pile[-1] == card:
        orders = list(permutations(new_pile))
        result = {}
        for order, c in Counter(orders).items():
            d = list(decks)
            d[cur] = d[cur] + order
            result[(d[0], d[1], (), cur)] = Fraction(c, len(orders))
        return result

    other = 1 - cur
    if not decks[other]:
        # the rotation reaches an empty deck: that player is out and,
        # with two players, the current one wins
        return {("end", cur): Fraction(1)}
    return {(decks[0], decks[1], new_pile, other): Fraction(1)}


def reachable(starts):
    graph = {}
    stack = list(starts)
    while stack:
        s = stack.pop()
        if s in graph or s[0] == "end":
            continue
        graph[s] = transitions(s)
        stack.extend(graph[s])
    return graph


def solve_linear(graph, rhs):
    """Solve ``x(s) - sum_t p(s,t) x(t) = rhs(s)`` over transient states."""
    states = list(graph)
    index = {s: i for i, s in enumerate(states)}
    rows = []
    for s in states:
        row = {index[s]: Fraction(1)}
        for t, p in graph[s].items():
            if t[0] != "end":
                row[index[t]] = row.get(index[t], Fraction(0)) - p
        rows.append([row, Fraction(rhs(s))])

    n = len(rows)
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][0].get(col))
        rows[col], rows[pivot] = rows[pivot], rows[col]
        prow, prhs = rows[col]
        inv = 1 / prow[col]
        prow = {k: v * inv for k, v in prow.items()}
        prhs *= inv
        rows[col] = [prow, prhs]
        for r in range(n):
            f = rows[r][0].get(col) if r != col else None
            if not f:
                continue
            row = rows[r][0]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rows[r][1] -= f * prhs
    return {s: rows[index[s]][1] for s in states}


def solve(shoe):
    """Exact ``(P(player 0 wins), E[turns], Var[turns], n_positions)``."""
    start = initial_distribution(tuple(shoe))
    graph = reachable(start)

    def wins_now(s):
        return sum(p for t, p in graph[s].items() if t == ("end", 0))

    win0 = solve_linear(graph, wins_now)
    # every transition is one turn
    mean = solve_linear(graph, lambda s: 1)
    # E[T^2 | s] = sum_t p (1 + T_t)^2 = 1 + sum_t p (2 E[T_t] + E[T_t^2])
    second = solve_linear(
        graph,
        lambda s: 1 + sum(2 * p * mean[t] for t, p in graph[s].items() if t[0] != "end"),
    )
    p0 = sum(p * win0[s] for s, p in start.items())
    m1 = sum(p * mean[s] for s, p in start.items())
    m2 = sum(p * second[s] for s, p in start.items())
    return p0, m1, m2 - m1 * m1, len(graph)
