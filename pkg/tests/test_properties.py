"""Property-based checks of invariants that hold for every input."""
import math
import random

from hypothesis import HealthCheck, given, settings, strategies as st

from netform.beliefs import SimpleBeliefs
from netform.dynamics import Game, GameState, Mode, random_path, resolve_soe, run, step
from netform.graph import (Network, TopologyClass as T, all_pairs, classify, component_of, count_components,
                           distance, is_connected, iter_bits)
from netform.payoff import P0, P1, P2, P3, consents, payoff, payoff_from_values

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRESETS = [P1, P2, P3]


@st.composite
def networks(draw, min_n=2, max_n=7):
    n = draw(st.integers(min_n, max_n))
    pairs = all_pairs(n)
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Network.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


@st.composite
def games(draw, presets=PRESETS, min_n=2, max_n=6, mode=Mode.SIMPLE):
    ps = draw(st.sampled_from(presets))
    n = draw(st.integers(min_n, max_n))
    kappa = tuple(draw(st.lists(st.sampled_from("ab"), min_size=n, max_size=n)))
    return Game(ps.space, ps.params(n), kappa, mode)


@given(networks())
def test_distance_symmetric_and_triangle(g):
    n = g.n_agents
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            dij = distance(g, i, j)
            assert dij == distance(g, j, i)
            for k in range(1, n + 1):
                if dij != math.inf and distance(g, j, k) != math.inf:
                    assert distance(g, i, k) <= dij + distance(g, j, k)


@given(networks())
def test_components_partition_non_singletons(g):
    seen = set()
    for m in g.component_masks:
        members = set(iter_bits(m))
        assert not members & seen
        seen |= members
    assert seen == {i for p in g.links for i in p}
    for p in g.links:
        c = component_of(g, p[0])
        assert p in c.links and p[1] in c.members


@given(networks())
def test_classifier_consistency(g):
    cls = classify(g)
    if T.STAR in cls:
        assert T.TREE in cls and T.CORE_PERIPHERY in cls
    if is_connected(g):
        assert (T.TREE in cls) == (T.MINIMALLY_CONNECTED in cls)
    if T.MINIMALLY_CONNECTED in cls:
        for p in g.links:
            h = g.without_link(*p)
            isolated = any(h.degree(i) == 0 for i in p)
            assert count_components(h) > count_components(g) or isolated


@given(networks(min_n=3), st.data())
def test_payoff_depends_only_on_own_component(g, data):
    n = g.n_agents
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    kappa = tuple(rng.choice("ab") for _ in range(n))
    i = data.draw(st.integers(1, n))
    mine = component_of(g, i).members
    outside = [p for p in all_pairs(n) if p[0] not in mine and p[1] not in mine]
    if not outside:
        return
    p = data.draw(st.sampled_from(outside))
    before = payoff(i, g, kappa, P3.params(n), P3.space)
    assert payoff(i, g.toggled(*p), kappa, P3.params(n), P3.space) == before


@given(networks(), st.floats(0.05, 0.9), st.floats(0.0, 0.09))
def test_payoff_monotone_in_delta(g, d, bump):
    vals = [0.0] + [1.0 + 0.1 * i for i in range(1, g.n_agents + 1)]
    for i in range(1, g.n_agents + 1):
        assert payoff_from_values(g, i, vals, d + bump, 1.0) >= payoff_from_values(g, i, vals, d, 1.0) - 1e-12


@given(games(), st.integers(0, 10 ** 6), st.integers(1, 60))
def test_simple_rule_invariants(game, seed, length):
    state = GameState.initial(game)
    prev = state.beliefs.known
    for pair in random_path(random.Random(seed), game.params.n_agents, length):
        before = state.network
        state, out = step(state, pair)
        assert len(before.links ^ state.network.links) <= 1
        known = state.beliefs.known
        n = game.params.n_agents
        for i in range(1, n + 1):
            assert prev[i] & ~known[i] == 0
            for j in range(1, n + 1):
                assert bool(known[i] >> j & 1) == bool(known[j] >> i & 1)
        for m in state.network.component_masks:
            for i in iter_bits(m):
                assert known[i] & m == m
        prev = known


@given(games(), st.integers(0, 10 ** 6), st.integers(0, 40))
def test_severance_agrees_with_complete_information(game, seed, length):
    hist = run(GameState.initial(game), random_path(random.Random(seed), game.params.n_agents, length))
    st_simple = hist.final_state
    st_complete = GameState.initial(game.with_mode(Mode.COMPLETE), st_simple.network)
    for p in st_simple.network.links:
        assert resolve_soe(st_simple, p) == resolve_soe(st_complete, p)


def _all_or_nothing(known: int, comp: int) -> bool:
    return known & comp in (0, comp)


@given(games(), st.integers(0, 10 ** 6), st.integers(0, 40))
def test_link_dominance_with_all_or_nothing_knowledge(game, seed, length):
    # a link a fully informed agent accepts is also accepted on beliefs, as long as
    # each side knows either all or none of the other side's component
    assert game.ef >= game.params.cost
    hist = run(GameState.initial(game), random_path(random.Random(seed), game.params.n_agents, length))
    s = hist.final_state
    net, known = s.network, s.beliefs.known
    d, c = game.params.delta, game.params.cost
    for i, j in all_pairs(game.params.n_agents):
        if net.has_link(i, j):
            continue
        ci, cj = net.reach_mask(i), net.reach_mask(j)
        if ci == cj:
            continue
        for a, b, cb in ((i, j, cj), (j, i, ci)):
            if not _all_or_nothing(known[a], cb):
                continue
            if consents(net, a, b, game.truth, d, c):
                assert consents(net, a, b, s.beliefs.values_for(a, game), d, c)


@given(games(presets=[P0]), st.integers(0, 10 ** 6))
def test_low_prior_stays_empty(game, seed):
    hist = run(GameState.initial(game), random_path(random.Random(seed), game.params.n_agents, 50))
    assert all(not g.links for g in hist.networks())


@given(games(presets=[P1, P2, P3], min_n=2, max_n=4, mode=Mode.BAYES), st.integers(0, 10 ** 6))
def test_bayes_truth_survives(game, seed):
    state = GameState.initial(game)
    for pair in random_path(random.Random(seed), game.params.n_agents, 12):
        size = len(state.beliefs.consistent)
        state, _ = step(state, pair)
        assert state.beliefs.truth_idx in state.beliefs.consistent
        assert len(state.beliefs.consistent) <= size
        total = sum(state.beliefs.weights)
        assert total > 0


def test_dominance_can_fail_with_mixed_knowledge():
    # agent 1 knows agent 2 is low-value but not that agent 2's partner is type a
    game = Game(P3.space, P3.params(3), ("b", "b", "a"), Mode.SIMPLE)
    net = Network.from_edges(3, [(2, 3)])
    beliefs = SimpleBeliefs((0, 0b0110, 0b1110, 0b1100))
    d, c = P3.delta, P3.cost
    assert consents(net, 1, 2, game.truth, d, c)
    assert not consents(net, 1, 2, beliefs.values_for(1, game), d, c)
