"""Exact shortest-path network design via branch-and-price.

The path-based ILP keeps integer per-arc activation counts, binary arc
indicators, and one nonnegative column per candidate routing path.  Path
columns are priced on demand by a constrained-shortest-path label search;
optional subpath rows (a chosen path forces its prefixes and suffixes to be
chosen between their endpoints too) tighten the relaxation.  The trivial
fixed-routing solver and a brute-force oracle live here as well.

All rows are oriented so that their duals are nonnegative at an optimum,
which the pricing bound relies on.
"""
from __future__ import annotations

import heapq
import itertools
from bisect import insort
from dataclasses import dataclass, field
from fractions import Fraction

from .bnb import BnbConfig, branch_and_bound
from .lp import GE, EQ, LpModel, LpSolution, solve_lp
from .model import (
    Activation,
    FULL_DUPLEX,
    Network,
    TrafficMatrix,
    full_activation,
)
from .routing import (
    Disconnected,
    Path,
    is_spr_routable,
    k_shortest_paths,
    make_path,
    shortest_lengths_from,
    shortest_path_unique,
    spr_route,
)

INITIAL_PATHS = 5
INT_TOL = 1e-6


class NotRoutableInFull(RuntimeError):
    pass


class DisconnectedPair(RuntimeError):
    pass


class DuplicatePath(ValueError):
    pass


class TooLarge(RuntimeError):
    pass


@dataclass
class DualPrices:
    """Named duals of the four row families feeding the pricing bound."""

    alpha: dict[tuple[int, int], object]
    beta: dict[tuple[tuple[int, int], int], object]
    gamma: dict[int, object]
    delta: dict[tuple[tuple[int, int], tuple[int, ...]], object]


@dataclass
class PricingState:
    """Evidence from the previous pricing attempt for one terminal pair.

    After a failed search every out-of-model path had dual cost at least the
    old bound; per-arc costs dropped by at most ``drop`` in total since, so no
    path can beat a new bound that sits at least ``drop`` lower.
    """

    alpha_prev: object = None
    dcost_prev: dict[int, object] = field(default_factory=dict)
    last_failed: bool = False


@dataclass
class _PathEntry:
    column: int
    short_row: int
    path: Path


class _PairData:
    def __init__(self, s: int, t: int, demand: Fraction, conn_row: int | None):
        self.s = s
        self.t = t
        self.demand = demand
        self.conn_row = conn_row
        self.eb_row: dict[int, int] = {}
        self.entries: dict[tuple[int, ...], _PathEntry] = {}
        self.order: list[tuple[tuple, tuple[int, ...]]] = []  # (order key, arcs)
        self.state = PricingState()


class MspndModel:
    """LP model plus the registry of priced paths per (terminal or auxiliary) pair."""

    def __init__(self, net: Network, traffic: TrafficMatrix, strengthening: bool):
        self.net = net
        self.traffic = traffic
        self.strengthening = strengthening
        self.lp = LpModel(name="mspnd")
        self.x_col: list[int] = []
        self.y_col: list[int] = []
        self.cap_row: list[int] = []
        self.pairs: dict[tuple[int, int], _PairData] = {}
        self.one_shortest = _is_one_shortest(net)
        self._len_cache: dict[int, list[float]] = {}
        for arc in net.arcs:
            self.x_col.append(self.lp.add_column(obj=1, lb=0, ub=arc.mu, name=f"x_{arc.id}"))
            self.y_col.append(self.lp.add_column(obj=0, lb=0, ub=1, name=f"y_{arc.id}"))
        for arc in net.arcs:
            self.cap_row.append(
                self.lp.add_row({self.x_col[arc.id]: arc.ccap}, GE, 0, name=f"cap_{arc.id}")
            )
            self.lp.add_row({self.x_col[arc.id]: 1, self.y_col[arc.id]: -1}, GE, 0, name=f"cl_{arc.id}")
            self.lp.add_row({self.y_col[arc.id]: arc.mu, self.x_col[arc.id]: -1}, GE, 0, name=f"cu_{arc.id}")
        if net.duplex_mode == FULL_DUPLEX:
            assert net.link_pair is not None
            for arc in net.arcs:
                rev = net.link_pair[arc.id]
                if arc.id < rev:
                    self.lp.add_row({self.x_col[arc.id]: 1, self.x_col[rev]: -1}, EQ, 0, name=f"dx_{arc.id}")
                    self.lp.add_row({self.y_col[arc.id]: 1, self.y_col[rev]: -1}, EQ, 0, name=f"dy_{arc.id}")

    @property
    def terminal_pairs(self) -> list[tuple[int, int]]:
        return [p for p in sorted(self.pairs) if self.pairs[p].conn_row is not None]

    def ensure_pair(self, pair: tuple[int, int]) -> _PairData:
        pd = self.pairs.get(pair)
        if pd is None:
            demand = self.traffic.demand(*pair)
            conn = None
            if demand > 0:
                conn = self.lp.add_row({}, GE, 1, name=f"conn_{pair[0]}_{pair[1]}")
            pd = _PairData(pair[0], pair[1], demand, conn)
            self.pairs[pair] = pd
        return pd


def _is_one_shortest(net: Network) -> bool:
    """True when no arc has a strictly shorter parallel route."""
    counts = full_activation(net).counts
    tails = {arc.tail for arc in net.arcs}
    dist = {u: shortest_lengths_from(net, counts, u) for u in tails}
    return all(dist[arc.tail][arc.head] == arc.length for arc in net.arcs)


def build_root_model(net: Network, traffic: TrafficMatrix, strengthening: bool = True) -> MspndModel:
    """Root model: all activation columns, plus the five shortest paths per pair."""
    model = MspndModel(net, traffic, strengthening)
    for pair in traffic.terminals:
        model.ensure_pair(pair)
    for pair in traffic.terminals:
        paths = k_shortest_paths(net, pair[0], pair[1], INITIAL_PATHS)
        if not paths:
            raise DisconnectedPair(f"no path for terminal pair {pair}")
        pd = model.pairs[pair]
        for path in paths:
            if path.arcs not in pd.entries:
                add_path_column(model, pair, path)
    return model


def add_path_column(model: MspndModel, pair: tuple[int, int], path: Path) -> int:
    """Add one path column with its ordering row, updating coupled rows.

    The new column enters the pair's connectivity row, its arcs' edge-buying
    rows (created on first use) and capacity rows, and the ordering rows of
    all shorter model paths; its own ordering row caps the longer ones.  With
    strengthening on, prefix/suffix subpaths at every interior vertex are
    added recursively and tied to the new column; single-arc subpath rows are
    dropped under one-shortest lengths.
    """
    net = model.net
    pd = model.ensure_pair(pair)
    if path.arcs in pd.entries:
        raise DuplicatePath(f"path {path.arcs} already priced for pair {pair}")
    key = path.order_key()
    coefs: dict[int, object] = {}
    if pd.conn_row is not None:
        coefs[pd.conn_row] = 1
    for aid in path.arcs:
        row = pd.eb_row.get(aid)
        if row is None:
            row = model.lp.add_row(
                {model.y_col[aid]: 1}, GE, 0, name=f"eb_{pair[0]}_{pair[1]}_{aid}"
            )
            pd.eb_row[aid] = row
        coefs[row] = -1
        if pd.demand > 0:
            coefs[model.cap_row[aid]] = -pd.demand
    for okey, arcs in pd.order:
        if okey < key:
            coefs[pd.entries[arcs].short_row] = -1
    column = model.lp.add_column(
        obj=0, lb=0, ub=None, coefs=coefs,
        name=f"z_{pair[0]}_{pair[1]}_{len(pd.entries)}",
    )
    short_coefs: dict[int, object] = {model.y_col[aid]: -1 for aid in path.arcs}
    for okey, arcs in pd.order:
        if okey > key:
            short_coefs[pd.entries[arcs].column] = -1
    short_row = model.lp.add_row(
        short_coefs, GE, -path.hops,
        name=f"sp_{pair[0]}_{pair[1]}_{len(pd.entries)}",
    )
    pd.entries[path.arcs] = _PathEntry(column, short_row, path)
    insort(pd.order, (key, path.arcs))

    if model.strengthening and path.hops >= 2:
        for cut in range(1, path.hops):
            for sub_arcs in (path.arcs[:cut], path.arcs[cut:]):
                if len(sub_arcs) == 1 and model.one_shortest:
                    continue
                sub = make_path(net, sub_arcs)
                sub_pd = model.ensure_pair((sub.source, sub.target))
                if sub.arcs not in sub_pd.entries:
                    add_path_column(model, (sub.source, sub.target), sub)
                model.lp.add_row(
                    {sub_pd.entries[sub.arcs].column: 1, column: -1}, GE, 0,
                    name=f"sub_{pair[0]}_{pair[1]}_{cut}",
                )
    return column


def extract_duals(model: MspndModel, sol: LpSolution) -> DualPrices:
    """Named duals; tiny negatives from floating solves clamp to zero."""
    exact = isinstance(sol.objective, (int, Fraction))
    clamp = (lambda v: v) if exact else (lambda v: v if v > 0 else 0.0)
    alpha, beta, gamma, delta = {}, {}, {}, {}
    for arc_id, row in enumerate(model.cap_row):
        gamma[arc_id] = clamp(sol.dual.get(row, 0))
    for pair, pd in model.pairs.items():
        if pd.conn_row is not None:
            alpha[pair] = clamp(sol.dual.get(pd.conn_row, 0))
        for aid, row in pd.eb_row.items():
            beta[(pair, aid)] = clamp(sol.dual.get(row, 0))
        for arcs, entry in pd.entries.items():
            delta[(pair, arcs)] = clamp(sol.dual.get(entry.short_row, 0))
    return DualPrices(alpha, beta, gamma, delta)


def compute_dcost(duals: DualPrices, pair: tuple[int, int], arc_id: int, demand):
    """Per-arc dual cost beta[pair, arc] + demand * gamma[arc]."""
    return duals.beta.get((pair, arc_id), 0) + demand * duals.gamma.get(arc_id, 0)


def _reverse_dcost_to(net: Network, dcost, t: int) -> dict[int, object]:
    """Cheapest dual cost from each vertex into t (missing = cannot reach t)."""
    best: dict[int, object] = {t: 0}
    heap: list[tuple[object, int]] = [(0, t)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > best.get(v, d):
            continue
        for arc in net.in_arcs[v]:
            nd = d + dcost[arc.id]
            u = arc.tail
            if u not in best or nd < best[u]:
                best[u] = nd
                heapq.heappush(heap, (nd, u))
    return best


def _label_scan(net, pd, dcost, bound, cost_to_t, len_from_s, dominate: bool) -> Path | None:
    """Label-setting keyed by (len - len(s,v), len(s,v), dual cost, hops, arcs).

    Dijkstra-length labels pop first, so paths short in total length surface
    before longer detours.  With ``dominate`` set, a label weakly dominated at
    its vertex is discarded (cycles always are); otherwise elementarity is
    enforced through the visited-vertex mask.
    """
    s, t = pd.s, pd.t
    heap = [(0, 0, 0, 0, (), 0, s, 1 << s)]
    frontier: dict[int, list] = {s: [(0, 0)]}
    while heap:
        _, _, cost, hops, arcs, length, v, mask = heapq.heappop(heap)
        if v == t:
            if arcs in pd.entries:
                continue
            return make_path(net, arcs)
        for arc in net.out_arcs[v]:
            w = arc.head
            if not dominate and (mask >> w) & 1:
                continue
            ncost = cost + dcost[arc.id]
            rest = cost_to_t.get(w)
            if rest is None or not ncost + rest < bound:
                continue
            nlen = length + arc.length
            if dominate:
                entries = frontier.setdefault(w, [])
                if any(fl <= nlen and fc <= ncost for fl, fc in entries):
                    continue
                entries.append((nlen, ncost))
            base = len_from_s[w]
            heapq.heappush(
                heap,
                (nlen - base, base, ncost, hops + 1, arcs + (arc.id,), nlen, w, mask | (1 << w)),
            )
    return None


def price_paths(
    model: MspndModel, duals: DualPrices, pair: tuple[int, int], state: PricingState
) -> Path | None:
    """Length-shortest new path whose dual cost stays below the pair's bound.

    A first pass discards dominated labels (which also rules out cycles); if
    it only rediscovers known paths, a second pass reruns the search without
    domination and with explicit vertex checks, which is complete.
    """
    net = model.net
    pd = model.pairs[pair]
    alpha = duals.alpha.get(pair, 0)
    dcost = {a.id: compute_dcost(duals, pair, a.id, pd.demand) for a in net.arcs}
    if state.last_failed and state.alpha_prev is not None:
        drop = sum(
            max(0, state.dcost_prev.get(a.id, 0) - dcost[a.id]) for a in net.arcs
        )
        if alpha <= state.alpha_prev - drop:
            return None
    eps = 0 if isinstance(alpha, (int, Fraction)) else 1e-9

    def record(found: Path | None) -> Path | None:
        state.alpha_prev = alpha
        state.dcost_prev = dcost
        state.last_failed = found is None
        return found

    if alpha <= eps:
        return record(None)
    cost_to_t = _reverse_dcost_to(net, dcost, pd.t)
    len_from_s = model._len_cache.get(pd.s)
    if len_from_s is None:
        len_from_s = shortest_lengths_from(net, full_activation(net).counts, pd.s)
        model._len_cache[pd.s] = len_from_s
    found = _label_scan(net, pd, dcost, alpha - eps, cost_to_t, len_from_s, True)
    if found is None:
        found = _label_scan(net, pd, dcost, alpha - eps, cost_to_t, len_from_s, False)
    return record(found)


def _price_against(model: MspndModel, duals: DualPrices) -> list[int]:
    """One new path per terminal pair against the same duals, merged by pair id."""
    found: list[tuple[tuple[int, int], Path]] = []
    for pair in model.terminal_pairs:
        pd = model.pairs[pair]
        path = price_paths(model, duals, pair, pd.state)
        if path is not None:
            found.append((pair, path))
    added = []
    for pair, path in found:
        if path.arcs not in model.pairs[pair].entries:
            added.append(add_path_column(model, pair, path))
    return added


def _price_round(model: MspndModel, sol: LpSolution) -> list[int]:
    return _price_against(model, extract_duals(model, sol))


def _feasibility_price(model: MspndModel, mode: str) -> list[int]:
    """Phase-one pricing for an infeasible restricted master.

    A master restricted to too few path columns can be infeasible even though
    the full column set is not (capacity rows cap how much selection mass the
    known paths can carry).  Relax every connectivity row with a unit-cost
    slack, minimize the total slack, and price new paths against those duals;
    an empty return certifies that the relaxation itself is infeasible.
    """
    lp = model.lp
    phase = LpModel(name="feas")
    for j in range(lp.n_cols):
        phase.add_column(obj=0, lb=lp.lower[j], ub=lp.upper[j])
    for i in range(lp.n_rows):
        phase.add_row(dict(lp.row_coefs[i]), lp.senses[i], lp.rhs[i])
    for pair in model.terminal_pairs:
        phase.add_column(obj=1, lb=0, ub=1, coefs={model.pairs[pair].conn_row: 1})
    sol = solve_lp(phase, mode)
    if sol.status != "optimal":
        return []
    tol = 0 if isinstance(sol.objective, (int, Fraction)) else 1e-9
    if sol.objective <= tol:
        return []
    return _price_against(model, extract_duals(model, sol))


def _decode_activation(model: MspndModel, sol: LpSolution) -> Activation:
    counts = tuple(
        int(round(float(sol.primal[model.x_col[a.id]]))) for a in model.net.arcs
    )
    return Activation(counts)


def _integral_on(sol: LpSolution, columns) -> bool:
    return all(abs(float(sol.primal[j]) - round(float(sol.primal[j]))) <= INT_TOL for j in columns)


def _complete_spr_paths(model: MspndModel, sol: LpSolution) -> list[int]:
    """At integral nodes, pull the decoded network's true routing paths in.

    The relaxation only constrains paths present in the model; if the unique
    shortest active path of some pair is missing, its ordering row is what
    cuts the bogus point off, so adding the column restores correctness.
    """
    activation = _decode_activation(model, sol)
    added = []
    for pair in model.terminal_pairs:
        path = shortest_path_unique(model.net, activation, pair[0], pair[1])
        if path is not None and path.arcs not in model.pairs[pair].entries:
            added.append(add_path_column(model, pair, path))
    return added


def root_lp_value(net: Network, traffic: TrafficMatrix, strengthening: bool, mode: str = "exact"):
    """Root relaxation value once pricing is exhausted (no branching)."""
    model = build_root_model(net, traffic, strengthening)
    while True:
        sol = solve_lp(model.lp, mode)
        if sol.status == "infeasible":
            if _feasibility_price(model, mode):
                continue
            raise NotRoutableInFull("relaxation infeasible: no activation can route the demands")
        if sol.status != "optimal":
            raise RuntimeError(f"root relaxation is {sol.status}")
        if _price_round(model, sol):
            continue
        return sol.objective


@dataclass
class MspndResult:
    activation: Activation
    status: str
    bound: float
    value: int = 0

    def __post_init__(self):
        self.value = self.activation.value


def solve_f_mspnd(net: Network, traffic: TrafficMatrix) -> Activation:
    """Fixed-routing baseline: route in the full network, then drop spare
    connections; kept arcs still carry the same unique shortest paths."""
    try:
        routed = spr_route(net, full_activation(net), traffic)
    except Disconnected as exc:
        raise NotRoutableInFull(str(exc)) from exc
    counts = [0] * net.n_arcs
    for aid, load in routed.load.items():
        arc = net.arcs[aid]
        need = -(-load // arc.ccap)  # exact ceiling of load / ccap
        if need > arc.mu:
            raise NotRoutableInFull(f"arc {aid} overloaded even at full activation")
        counts[aid] = int(need)
    if net.duplex_mode == FULL_DUPLEX:
        assert net.link_pair is not None
        for aid in range(net.n_arcs):
            counts[aid] = max(counts[aid], counts[net.link_pair[aid]])
    activation = Activation(tuple(counts))
    activation.validate(net)
    return activation


def solve_mspnd(
    net: Network,
    traffic: TrafficMatrix,
    strengthening: bool = True,
    time_limit: float | None = None,
    mode: str = "float",
) -> MspndResult:
    """Exact minimum-activation design with shortest-path routability.

    Branch-and-price over the activation columns only (path columns stay
    continuous); every incumbent is re-verified exactly against the routing
    semantics before acceptance.  Raises NotRoutableInFull when the search
    proves that no activation at all can route the demands.
    """
    if not traffic.demands:
        act = Activation((0,) * net.n_arcs)
        return MspndResult(act, "optimal", 0.0)
    model = build_root_model(net, traffic, strengthening)
    int_cols = list(model.x_col) + list(model.y_col)
    x_set = set(model.x_col)
    y_set = set(model.y_col)

    def price(lp_model, sol):
        added = _price_round(model, sol)
        if added:
            return added
        if _integral_on(sol, int_cols):
            return _complete_spr_paths(model, sol)
        return []

    def accept(sol):
        activation = _decode_activation(model, sol)
        return is_spr_routable(net, activation, traffic)

    def branch_select(sol, fractional):
        ys = [j for j in fractional if j in y_set]
        pool = ys if ys else [j for j in fractional if j in x_set]
        dist = lambda j: abs(float(sol.primal[j]) - round(float(sol.primal[j])))
        return max(pool, key=lambda j: (dist(j), -j))

    initial = None
    try:
        warm = solve_f_mspnd(net, traffic)
    except NotRoutableInFull:
        warm = None  # the fixed-routing bound only exists for full-routable traffic
    if warm is not None:
        warm_primal = {model.x_col[a.id]: warm.counts[a.id] for a in net.arcs}
        warm_primal.update(
            {model.y_col[a.id]: (1 if warm.counts[a.id] > 0 else 0) for a in net.arcs}
        )
        initial = (warm.value, warm_primal)
    config = BnbConfig(
        mode=mode,
        time_limit=time_limit,
        objective_integral=True,
        price=price,
        accept_incumbent=accept,
        branch_select=branch_select,
        initial_incumbent=initial,
        infeasibility_price=lambda lp_model: _feasibility_price(model, mode),
    )
    result = branch_and_bound(model.lp, int_cols, config)
    if result.incumbent is None:
        if result.status == "infeasible":
            raise NotRoutableInFull("no activation can route the demands")
        raise RuntimeError("time limit reached before any feasible activation was found")
    counts = tuple(
        int(round(float(result.incumbent.primal.get(model.x_col[a.id], 0))))
        for a in net.arcs
    )
    activation = Activation(counts)
    activation.validate(net)
    status = "optimal" if result.status == "optimal" else "timeout"
    return MspndResult(activation, status, float(result.bound))


def brute_force_mspnd(net: Network, traffic: TrafficMatrix) -> Activation:
    """Exhaustive oracle over all activation vectors (duplex-symmetric only
    in full-duplex mode); guarded against oversized search spaces."""
    if net.duplex_mode == FULL_DUPLEX:
        assert net.link_pair is not None
        free_arcs = [a.id for a in net.arcs if a.id <= net.link_pair[a.id]]
    else:
        free_arcs = [a.id for a in net.arcs]
    size = 1
    for aid in free_arcs:
        size *= net.arcs[aid].mu + 1
        if size > 10_000_000:
            raise TooLarge("activation space exceeds 1e7 vectors")
    best: Activation | None = None
    for combo in itertools.product(*(range(net.arcs[a].mu + 1) for a in free_arcs)):
        counts = [0] * net.n_arcs
        for aid, chi in zip(free_arcs, combo):
            counts[aid] = chi
            if net.duplex_mode == FULL_DUPLEX:
                counts[net.link_pair[aid]] = chi
        value = sum(counts)
        if best is not None and value >= best.value:
            continue
        candidate = Activation(tuple(counts))
        if is_spr_routable(net, candidate, traffic):
            best = candidate
    if best is None:
        raise NotRoutableInFull("no feasible activation exists")
    return best
