"""Step-by-step invariant checking shared by the engine and acceptance tests."""

from bhikar_sawkar.engine import CardPlayed, GameEnded, HandWon, Status, new_game, step


def checked_run(config, rng):
    """Run one game, asserting every engine invariant after each step."""
    state = new_game(config, rng)
    total = config.total_cards()
    played = 0
    ended = 0
    out_before = [False] * config.players
    last = None
    while state.status is Status.RUNNING:
        turns_before = state.turns
        events = step(state, rng)
        if state.status is Status.ABORTED:
            break
        assert state.turns == turns_before + 1
        assert isinstance(events[0], CardPlayed)
        assert sum(isinstance(e, CardPlayed) for e in events) == 1
        played += 1
        if state.status is Status.RUNNING:
            assert state.cards_in_play() == total
            assert not state.eliminated[state.current]
        for p in range(config.players):
            if state.eliminated[p]:
                assert len(state.decks[p]) == 0
            if out_before[p]:
                assert state.eliminated[p]
        assert not out_before[events[0].player]
        for e in events:
            if isinstance(e, HandWon):
                assert 2 <= e.pile_size <= total
                # a card played onto an empty pile cannot win it
                assert e.pile_size != 1
            if isinstance(e, GameEnded):
                ended += 1
                assert e.total_turns == played
                assert state.alive() == [e.winner]
        out_before = list(state.eliminated)
        last = events
    return state, played, ended, last
