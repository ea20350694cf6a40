import random
from fractions import Fraction

import pytest

from greente import build_network
from greente.lp import solve_lp
from greente.toca import (
    alg_mcf,
    alg_mcf_pp,
    build_toca_lp,
    supports_scaled_traffic,
)
from conftest import random_net


def test_lp_single_arc(single_arc):
    t = build_toca_lp(single_arc, Fraction(1, 2))
    sol = solve_lp(t.model, "exact")
    assert sol.status == "optimal"
    assert sol.primal[t.x_col[0]] == Fraction(5, 2)  # demand rho * fcap = 2.5


def test_lp_diamond_each_arc_carries_itself(diamond):
    t = build_toca_lp(diamond, Fraction(1, 2))
    sol = solve_lp(t.model, "exact")
    assert sol.objective == 2
    for a in diamond.arcs:
        assert sol.primal[t.x_col[a.id]] == Fraction(1, 2)


def test_lp_scales_with_rho(single_arc):
    t = build_toca_lp(single_arc, Fraction(1, 10))
    sol = solve_lp(t.model, "exact")
    assert sol.primal[t.x_col[0]] == Fraction(1, 2)  # 5 * rho


def test_rho_validation(single_arc):
    with pytest.raises(ValueError):
        build_toca_lp(single_arc, 1)


def test_round_up_fixture_values(single_arc, diamond):
    assert alg_mcf(single_arc, Fraction(1, 2)).counts == (3,)
    assert alg_mcf(diamond, Fraction(1, 2)).counts == (1, 1, 1, 1)
    assert alg_mcf(single_arc, Fraction(9999, 10000)).counts == (5,)


def test_iterative_fixing_fixture_values(single_arc, diamond):
    assert alg_mcf_pp(single_arc, Fraction(1, 2)).counts == (3,)
    assert alg_mcf_pp(diamond, Fraction(1, 2)).value == 4


def test_integral_lp_means_no_extra_work(single_arc):
    # rho chosen so the fractional optimum is already integral
    rho = Fraction(2, 5)  # demand 2.0 on a ccap-1 arc
    assert alg_mcf(single_arc, rho).counts == alg_mcf_pp(single_arc, rho).counts == (2,)


def test_outputs_support_scaled_traffic_and_ordering():
    rng = random.Random(19)
    for _ in range(20):
        net = random_net(rng, n_max=5, arcs_max=8, mu_max=3)
        rho = Fraction(rng.choice([3, 5, 7]), 10)
        rounded = alg_mcf(net, rho)
        fixed = alg_mcf_pp(net, rho)
        assert fixed.value <= rounded.value
        for a in net.arcs:
            assert 0 <= fixed.counts[a.id] <= a.mu
        assert supports_scaled_traffic(net, rho, rounded)
        assert supports_scaled_traffic(net, rho, fixed)
        if net.duplex_mode == "full-duplex":
            for a in net.arcs:
                assert fixed.counts[a.id] == fixed.counts[net.link_pair[a.id]]


def test_deterministic_tie_breaking():
    net = build_network(
        [(0, 1, 1, 1, 2), (1, 2, 1, 1, 2), (0, 2, 1, 1, 2)]
    )
    rho = Fraction(1, 2)
    assert alg_mcf_pp(net, rho).counts == alg_mcf_pp(net, rho).counts


def test_oblivious_to_any_traffic_matrix():
    # the activation is a function of (topology, rho, mu) only: traffic never
    # enters the computation, so any permutation of demands leaves it fixed
    rng = random.Random(29)
    net = random_net(rng, n_max=5, arcs_max=8)
    rho = Fraction(1, 2)
    first = alg_mcf(net, rho)
    again = alg_mcf(net, rho)
    assert first.counts == again.counts


def brute_force_oblivious_value(net, rho):
    """Smallest integral activation that still embeds every arc's scaled
    capacity as a simultaneous flow (tiny instances only)."""
    import itertools

    best = None
    if net.duplex_mode == "full-duplex":
        free = [a.id for a in net.arcs if a.id <= net.link_pair[a.id]]
    else:
        free = [a.id for a in net.arcs]
    for combo in itertools.product(*(range(net.arcs[a].mu + 1) for a in free)):
        counts = [0] * net.n_arcs
        for aid, chi in zip(free, combo):
            counts[aid] = chi
            if net.duplex_mode == "full-duplex":
                counts[net.link_pair[aid]] = chi
        if best is not None and sum(counts) >= best:
            continue
        from greente import Activation

        if supports_scaled_traffic(net, rho, Activation(tuple(counts))):
            best = sum(counts)
    return best


def test_round_up_respects_the_approximation_ratio():
    rng = random.Random(71)
    for _ in range(10):
        net = random_net(rng, n_max=4, arcs_max=5, mu_max=2)
        rho = Fraction(rng.choice([3, 5, 7]), 10)
        mu_min = min(a.mu for a in net.arcs)
        ratio = max(Fraction(1, 1) / (rho * mu_min), Fraction(2))
        optimum = brute_force_oblivious_value(net, rho)
        value = alg_mcf(net, rho).value
        assert optimum is not None
        assert value <= ratio * optimum
        assert alg_mcf_pp(net, rho).value <= value
