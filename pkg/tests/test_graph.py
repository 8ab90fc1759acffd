import math

import pytest

from netform.graph import (Network, TopologyClass as T, all_pairs, classify, component_of, components,
                           count_components, distance, is_connected, is_minimal)

RING5 = Network.ring([1, 2, 3, 4, 5])
LINE5 = Network.line([1, 2, 3, 4, 5])


def test_links_are_normalized_and_validated():
    g = Network.from_edges(3, [(2, 1), (1, 2), (3, 2)])
    assert g.sorted_links() == [(1, 2), (2, 3)]
    with pytest.raises(ValueError):
        Network.from_edges(3, [(1, 1)])
    with pytest.raises(ValueError):
        Network.from_edges(3, [(1, 4)])
    with pytest.raises(ValueError):
        Network.from_edges(3, [(0, 2)])


def test_identity_is_link_set_equality():
    assert Network.from_edges(4, [(1, 2), (3, 4)]) == Network.from_edges(4, [(4, 3), (2, 1)])
    # isomorphic but differently labeled
    assert Network.from_edges(3, [(1, 2)]) != Network.from_edges(3, [(2, 3)])


def test_with_and_without_link():
    g = Network.empty(3).with_link(2, 1)
    assert g.has_link(1, 2) and g.has_link(2, 1)
    assert g.without_link(1, 2) == Network.empty(3)
    assert g.toggled(1, 2) == Network.empty(3)
    with pytest.raises(ValueError):
        g.with_link(1, 7)


def test_distance_examples():
    assert distance(RING5, 1, 3) == 2
    assert distance(Network.empty(5), 1, 2) == math.inf
    assert distance(LINE5, 1, 5) == 4
    assert distance(LINE5, 3, 3) == 0
    with pytest.raises(ValueError):
        distance(LINE5, 1, 6)


def test_components():
    g = Network.from_edges(5, [(1, 2), (2, 3), (4, 5)])
    assert component_of(g, 1).members == {1, 2, 3}
    assert component_of(g, 4).members == {4, 5}
    c = component_of(Network.empty(5), 3)
    assert c.members == {3} and not c.links
    assert count_components(g) == 2
    assert count_components(Network.empty(5)) == 0
    assert count_components(RING5) == 1
    assert sorted(sorted(c.members) for c in components(g)) == [[1, 2, 3], [4, 5]]


def test_classify_star():
    star = Network.from_edges(5, [(1, 2), (1, 3), (1, 4), (1, 5)])
    assert classify(star) == {T.STAR, T.TREE, T.CORE_PERIPHERY, T.MINIMALLY_CONNECTED, T.CONNECTED}


def test_classify_ring_is_wheel():
    assert classify(RING5) == {T.WHEEL, T.CONNECTED}


def test_classify_path_wheel_reading():
    assert T.WHEEL in classify(LINE5, wheel="path")
    assert T.WHEEL not in classify(LINE5)
    assert T.WHEEL not in classify(RING5, wheel="path")


def test_classify_disconnected():
    g = Network.from_edges(5, [(1, 2), (2, 3), (4, 5)])
    assert classify(g) == {T.DISCONNECTED}
    assert not is_connected(g)
    # per-component minimality still holds
    assert is_minimal(g)


def test_classify_empty_and_complete():
    assert classify(Network.empty(4)) == {T.EMPTY, T.DISCONNECTED}
    k4 = Network.from_edges(4, all_pairs(4))
    assert {T.COMPLETE, T.CONNECTED} <= classify(k4)


def test_core_periphery_with_two_core_agents():
    g = Network.from_edges(5, [(1, 2), (1, 3), (1, 4), (2, 5)])
    cls = classify(g)
    assert T.CORE_PERIPHERY in cls and T.STAR not in cls and T.TREE in cls


def test_edgelist_and_json_roundtrip():
    g = Network.from_edges(6, [(1, 2), (5, 6), (2, 4)])
    assert Network.from_edgelist(6, g.to_edgelist()) == g
    assert Network.from_json(g.to_json()) == g
    assert g.to_json() == {"n": 6, "links": [[1, 2], [2, 4], [5, 6]]}
    with pytest.raises(ValueError, match="line 2"):
        Network.from_edgelist(6, "1 2\n3\n")
