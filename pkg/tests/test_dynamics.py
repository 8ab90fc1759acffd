import math
import random
from collections import Counter

import pytest

from netform.dynamics import (Game, GameState, Mode, default_horizon, random_pair, random_path, resolve_soe,
                              run, step)
from netform.experiments import EXAMPLE1_PATH, FIG3_KAPPA, FIG3_PATH
from netform.graph import Network
from netform.payoff import P1, P3

ALL_B = ("b",) * 5


def _state(ps, kappa, mode, net=None):
    return GameState.initial(Game(ps.space, ps.params(len(kappa)), tuple(kappa), mode), net)


def test_mode_aliases():
    assert Mode.parse("IncompleteSimple") is Mode.SIMPLE
    assert Mode.parse("incomplete-bayes") is Mode.BAYES
    assert Mode.parse("Complete") is Mode.COMPLETE
    with pytest.raises(ValueError):
        Mode.parse("psychic")


def test_strangers_link_on_prior():
    out = resolve_soe(_state(P1, ALL_B, Mode.SIMPLE), (1, 2))
    assert out.a_ij and out.a_ji and out.link_after and out.changed


def test_known_low_singletons_refuse():
    out = resolve_soe(_state(P1, ALL_B, Mode.COMPLETE), (1, 2))
    assert not out.link_after and not out.changed


def test_ring_links_are_kept():
    st = GameState.informed(Game(P1.space, P1.params(5), ALL_B, Mode.SIMPLE), Network.ring([1, 2, 3, 4, 5]))
    for pair in [(1, 2), (2, 3), (3, 4), (4, 5), (1, 5)]:
        out = resolve_soe(st, pair)
        assert out.link_before and out.link_after


def test_second_period_of_example1():
    st, _ = step(_state(P1, ALL_B, Mode.SIMPLE), (1, 2))
    st, out = step(st, (2, 3))
    assert out.link_after
    assert st.network == Network.from_edges(5, [(1, 2), (2, 3)])
    assert st.period == 2


def test_example1_both_modes():
    inc = run(_state(P1, ALL_B, Mode.SIMPLE), EXAMPLE1_PATH)
    assert inc.final == Network.ring([1, 2, 3, 4, 5])
    comp = run(_state(P1, ALL_B, Mode.COMPLETE), EXAMPLE1_PATH)
    assert all(not g.links for g in comp.networks())


def test_figure3_link_counts():
    c = run(_state(P3, FIG3_KAPPA, Mode.COMPLETE), FIG3_PATH)
    i = run(_state(P3, FIG3_KAPPA, Mode.SIMPLE), FIG3_PATH)
    assert len(c.final.links) == 12
    assert len(i.final.links) == 8
    # what the engine reaches: a star on the low-value agent
    assert i.final == Network.from_edges(9, [(k, 9) for k in range(1, 9)])


def test_noop_step_keeps_network():
    st = GameState.informed(Game(P1.space, P1.params(5), ALL_B, Mode.SIMPLE), Network.ring([1, 2, 3, 4, 5]))
    st2, out = step(st, (1, 2))
    assert st2.network is st.network
    assert out.link_before and out.link_after and not out.changed


def test_bad_pairs_rejected():
    st = _state(P1, ALL_B, Mode.SIMPLE)
    with pytest.raises(ValueError):
        step(st, (2, 2))
    with pytest.raises(ValueError):
        resolve_soe(st, (0, 3))


def test_bayes_needs_empty_start():
    with pytest.raises(ValueError):
        _state(P1, ALL_B, Mode.BAYES, Network.from_edges(5, [(1, 2)]))


def test_history_snapshots_chain():
    rng = random.Random(3)
    hist = run(_state(P1, ALL_B, Mode.SIMPLE), random_path(rng, 5, 60))
    nets = hist.networks()
    for a, b in zip(nets, nets[1:]):
        assert len(a.links ^ b.links) <= 1
    assert len(hist.to_jsonl().splitlines()) == 60


def test_run_is_deterministic():
    path = random_path(random.Random(11), 6, 100)
    st = _state(P3, ("a", "b", "a", "a", "b", "a"), Mode.SIMPLE)
    assert run(st, path).to_jsonl() == run(st, path).to_jsonl()


def test_random_pair_two_agents():
    rng = random.Random(0)
    assert {random_pair(rng, 2) for _ in range(50)} == {(1, 2)}
    with pytest.raises(ValueError):
        random_pair(rng, 1)


def test_random_pair_uniform():
    rng = random.Random(2024)
    draws = 100_000
    counts = Counter(random_pair(rng, 5) for _ in range(draws))
    assert len(counts) == 10
    sigma = math.sqrt(draws * 0.1 * 0.9)
    for c in counts.values():
        assert abs(c - draws * 0.1) < 3 * sigma


def test_random_pair_seeded():
    a = random_path(random.Random(5), 7, 30)
    b = random_path(random.Random(5), 7, 30)
    assert a == b


def test_default_horizon():
    assert default_horizon(5) == 100
    assert default_horizon(12) == 660
