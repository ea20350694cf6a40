import itertools
import random
from fractions import Fraction

import pytest

from greente import all_pairs_maxflow, build_network, extract_cut, max_flow
from greente.flows import NotMaximum, full_capacities
from conftest import random_net


def unit_caps(net):
    return {a.id: Fraction(1) for a in net.arcs}


def brute_force_min_cut(net, ecap, s, t):
    """Minimum over all vertex bipartitions with s inside and t outside."""
    others = [v for v in range(net.n_vertices) if v not in (s, t)]
    best = None
    for k in range(len(others) + 1):
        for inside in itertools.combinations(others, k):
            side = {s, *inside}
            cap = sum(
                (Fraction(ecap.get(a.id, 0)) for a in net.arcs
                 if a.tail in side and a.head not in side),
                Fraction(0),
            )
            if best is None or cap < best:
                best = cap
    return best


def test_single_arc_flow(single_arc):
    assert max_flow(single_arc, {0: Fraction(5)}, 0, 1).value == 5


def test_diamond_flow_matches_cut_enumeration(diamond):
    caps = unit_caps(diamond)
    result = max_flow(diamond, caps, 0, 3)
    assert result.value == 2
    assert brute_force_min_cut(diamond, caps, 0, 3) == 2


def test_early_termination_contract(diamond):
    result = max_flow(diamond, unit_caps(diamond), 0, 3, target=1)
    assert result.terminated_early
    assert result.value >= 1


def test_early_termination_unreachable_target(single_arc):
    result = max_flow(single_arc, {0: Fraction(5)}, 0, 1, target=9)
    assert not result.terminated_early
    assert result.value == 5


def test_cut_requires_completed_flow(diamond):
    partial = max_flow(diamond, unit_caps(diamond), 0, 3, target=1)
    with pytest.raises(NotMaximum):
        extract_cut(diamond, unit_caps(diamond), partial, 0, 3, "front")


def test_single_arc_cuts(single_arc):
    caps = {0: Fraction(5)}
    flow = max_flow(single_arc, caps, 0, 1)
    front = extract_cut(single_arc, caps, flow, 0, 1, "front")
    back = extract_cut(single_arc, caps, flow, 0, 1, "back")
    assert front.arc_ids == back.arc_ids == frozenset({0})
    assert front.capacity == back.capacity == 5


def test_two_hop_front_and_back_cuts():
    net = build_network([(0, 1, 1, 1, 1), (1, 2, 1, 1, 1)])
    caps = unit_caps(net)
    flow = max_flow(net, caps, 0, 2)
    assert extract_cut(net, caps, flow, 0, 2, "front").arc_ids == frozenset({0})
    assert extract_cut(net, caps, flow, 0, 2, "back").arc_ids == frozenset({1})


def test_diamond_front_cut_is_source_side(diamond):
    caps = unit_caps(diamond)
    flow = max_flow(diamond, caps, 0, 3)
    assert extract_cut(diamond, caps, flow, 0, 3, "front").arc_ids == frozenset({0, 1})


def test_all_pairs_maxflow(single_arc, diamond, triangle):
    lam = all_pairs_maxflow(single_arc)
    assert lam[(0, 1)] == 5 and lam[(1, 0)] == 0
    assert all_pairs_maxflow(diamond)[(0, 3)] == 2
    assert all_pairs_maxflow(triangle)[(0, 2)] == 6


def test_cut_duality_on_random_graphs():
    rng = random.Random(31)
    for trial in range(60):
        net = random_net(rng, n_max=6, arcs_max=10)
        caps = {a.id: Fraction(rng.randint(0, 6), rng.randint(1, 3)) for a in net.arcs}
        s, t = 0, net.n_vertices - 1
        flow = max_flow(net, caps, s, t)
        front = extract_cut(net, caps, flow, s, t, "front")
        back = extract_cut(net, caps, flow, s, t, "back")
        assert front.capacity == flow.value == back.capacity
        assert brute_force_min_cut(net, caps, s, t) == flow.value
        for cut in (front, back):
            remaining = dict(caps)
            for aid in cut.arc_ids:
                remaining[aid] = Fraction(0)
            assert max_flow(net, remaining, s, t).value == 0


def test_flow_respects_capacities_and_conservation():
    rng = random.Random(8)
    for _ in range(30):
        net = random_net(rng, n_max=6, arcs_max=10)
        caps = {a.id: Fraction(rng.randint(0, 5)) for a in net.arcs}
        s, t = 0, net.n_vertices - 1
        result = max_flow(net, caps, s, t)
        net_out = {v: Fraction(0) for v in range(net.n_vertices)}
        for a in net.arcs:
            f = result.flow.get(a.id, Fraction(0))
            assert 0 <= f <= caps[a.id]
            net_out[a.tail] += f
            net_out[a.head] -= f
        for v in range(net.n_vertices):
            if v == s:
                assert net_out[v] == result.value
            elif v == t:
                assert net_out[v] == -result.value
            else:
                assert net_out[v] == 0


def test_full_capacities_uses_mu_times_ccap(triangle):
    assert full_capacities(triangle) == {0: 3, 1: 3, 2: 3}
