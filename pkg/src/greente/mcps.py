"""Exact minimum capacity-preserving subgraphs via branch-and-cut.

The cut family is exponential, so constraints are separated lazily: for each
pending pair an early-terminating max-flow certifies the retention target or
yields two violated cuts (front and back).  Cut selection prefers fewer arcs
through an integer-arithmetic capacity perturbation that never reorders cuts
of different unperturbed capacity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bnb import BnbConfig, branch_and_bound
from .flows import all_pairs_maxflow, extract_cut, max_flow
from .lp import GE, EQ, LpModel
from .model import Activation, FULL_DUPLEX, Network, as_fraction


@dataclass(frozen=True)
class McpsInstance:
    net: Network
    rho: Fraction
    lam: dict[tuple[int, int], Fraction]  # all-pairs max-flow at full activation


@dataclass(frozen=True)
class CutConstraint:
    pair: tuple[int, int]
    arc_ids: frozenset[int]
    rhs: Fraction

    def violated_by(self, net: Network, xhat) -> bool:
        lhs = sum(
            (net.arcs[a].ccap * as_fraction(xhat.get(a, 0)) for a in self.arc_ids),
            Fraction(0),
        )
        return lhs < self.rhs


def make_instance(net: Network, rho) -> McpsInstance:
    rho = as_fraction(rho)
    if not 0 < rho < 1:
        raise ValueError("rho must lie strictly between 0 and 1")
    return McpsInstance(net, rho, all_pairs_maxflow(net))


def _relevant_pairs(instance: McpsInstance) -> list[tuple[int, int]]:
    return sorted(pair for pair, lam in instance.lam.items() if lam > 0)


def precompute_lower_bounds(instance: McpsInstance):
    """Per-arc minimum retained connections, plus pairs already covered by them.

    For arc a = st the bound is the smallest chi(a), all other arcs fully
    active, that keeps the s-t max-flow at or above rho * lambda(s,t); pairs
    whose target is met with every arc at its bound never enter separation.
    """
    net, rho = instance.net, instance.rho
    lb: dict[int, int] = {}
    for arc in net.arcs:
        pair = (arc.tail, arc.head)
        target = rho * instance.lam[pair]
        bound = arc.mu
        for k in range(arc.mu + 1):
            ecap = {a.id: a.fcap for a in net.arcs}
            ecap[arc.id] = arc.ccap * k
            if max_flow(net, ecap, arc.tail, arc.head, target=target).value >= target:
                bound = k
                break
        lb[arc.id] = bound
    ecap_lb = {a.id: a.ccap * lb[a.id] for a in net.arcs}
    satisfied = set()
    for pair in _relevant_pairs(instance):
        target = rho * instance.lam[pair]
        if max_flow(net, ecap_lb, pair[0], pair[1], target=target).value >= target:
            satisfied.add(pair)
    return lb, satisfied


def _perturbed_caps(net: Network, ecap, target: Fraction):
    """Scale to integers and add 1 per arc so min cuts break ties by cardinality.

    Equivalence with the unperturbed test is exact: the perturbed flow meets
    the scaled target iff the unperturbed flow meets ``target``.
    """
    denoms = [as_fraction(v).denominator for v in ecap.values()]
    denoms.append(target.denominator)
    common = math.lcm(*denoms) if denoms else 1
    scale = (net.n_arcs + 1) * common
    pcap = {a: as_fraction(v) * scale + 1 for a, v in ecap.items()}
    for arc in net.arcs:
        pcap.setdefault(arc.id, Fraction(1))
    return pcap, target * scale


def separate_cuts(
    instance: McpsInstance, xhat, pending_pairs
) -> list[CutConstraint]:
    """Violated front/back cut constraints for the given fractional point.

    Empty result certifies that every pending pair meets its target, hence
    (with the preprocessing bounds) every constraint of the full family holds.
    """
    net, rho = instance.net, instance.rho
    ecap = {a.id: a.ccap * as_fraction(xhat.get(a.id, 0)) for a in net.arcs}
    cuts: list[CutConstraint] = []
    for pair in sorted(pending_pairs):
        target = rho * instance.lam[pair]
        pcap, ptarget = _perturbed_caps(net, ecap, target)
        result = max_flow(net, pcap, pair[0], pair[1], target=ptarget)
        if result.value >= ptarget:
            continue
        front = extract_cut(net, pcap, result, pair[0], pair[1], "front")
        back = extract_cut(net, pcap, result, pair[0], pair[1], "back")
        rhs = rho * instance.lam[pair]
        cuts.append(CutConstraint(pair, front.arc_ids, rhs))
        if back.arc_ids != front.arc_ids:
            cuts.append(CutConstraint(pair, back.arc_ids, rhs))
    return cuts


@dataclass
class McpsResult:
    activation: Activation
    status: str
    bound: float
    value: int = 0

    def __post_init__(self):
        self.value = self.activation.value


def audit_retention(instance: McpsInstance, activation: Activation) -> bool:
    """Independent all-pairs check lambda_H(s,t) >= rho * lambda_G(s,t)."""
    net = instance.net
    ecap = {a.id: a.ccap * activation.counts[a.id] for a in net.arcs}
    for pair in _relevant_pairs(instance):
        target = instance.rho * instance.lam[pair]
        if max_flow(net, ecap, pair[0], pair[1], target=target).value < target:
            return False
    return True


def solve_mcps(net: Network, rho, time_limit: float | None = None, mode: str = "float") -> McpsResult:
    """Minimum total connections keeping every pair's min-cut above rho times its
    full-network value; always feasible (full activation qualifies)."""
    instance = make_instance(net, rho)
    lb, satisfied = precompute_lower_bounds(instance)
    pending = [p for p in _relevant_pairs(instance) if p not in satisfied]

    model = LpModel(name="mcps")
    x_col = {}
    for arc in net.arcs:
        x_col[arc.id] = model.add_column(obj=1, lb=0, ub=arc.mu, name=f"x_{arc.id}")
    for arc in net.arcs:
        if lb[arc.id] > 0:
            model.add_row({x_col[arc.id]: 1}, GE, lb[arc.id], name=f"lb_{arc.id}")
    if net.duplex_mode == FULL_DUPLEX:
        assert net.link_pair is not None
        for arc in net.arcs:
            rev = net.link_pair[arc.id]
            if arc.id < rev:
                model.add_row({x_col[arc.id]: 1, x_col[rev]: -1}, EQ, 0, name=f"dx_{arc.id}")

    added_cuts: set[tuple[tuple[int, int], frozenset[int]]] = set()

    def separate(lp_model, sol):
        xhat = {a.id: sol.primal[x_col[a.id]] for a in net.arcs}
        new_rows = []
        for cut in separate_cuts(instance, xhat, pending):
            key = (cut.pair, cut.arc_ids)
            if key in added_cuts:
                continue
            added_cuts.add(key)
            coefs = {x_col[a]: net.arcs[a].ccap for a in cut.arc_ids}
            new_rows.append(
                lp_model.add_row(coefs, GE, cut.rhs, name=f"cut_{len(added_cuts)}")
            )
        return new_rows

    def accept(sol):
        chi = tuple(int(round(float(sol.primal[x_col[a.id]]))) for a in net.arcs)
        return audit_retention(instance, Activation(chi))

    config = BnbConfig(
        mode=mode,
        time_limit=time_limit,
        objective_integral=True,
        separate=separate,
        accept_incumbent=accept,
        initial_incumbent=(
            sum(a.mu for a in net.arcs),
            {x_col[a.id]: a.mu for a in net.arcs},
        ),
    )
    result = branch_and_bound(model, list(x_col.values()), config)
    assert result.incumbent is not None  # full activation is always feasible
    chi = tuple(
        int(round(float(result.incumbent.primal[x_col[a.id]]))) for a in net.arcs
    )
    activation = Activation(chi)
    activation.validate(net)
    status = "optimal" if result.status == "optimal" else "timeout"
    return McpsResult(activation, status, float(result.bound))
