"""Max-flow with early termination and residual-graph cut extraction.

Flows run on exact rational capacities because separation is called on
fractional LP points.  Cut extraction returns the front cut (near the source)
and the back cut (near the sink); both are full delta-out sets of a vertex
bipartition, so the emitted constraints are valid for the cut family.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .model import Network, as_fraction


class NotMaximum(RuntimeError):
    """Cut extraction requires a completed (not early-terminated) max flow."""


@dataclass(frozen=True)
class FlowResult:
    flow: dict[int, Fraction]
    value: Fraction
    terminated_early: bool


@dataclass(frozen=True)
class Cut:
    arc_ids: frozenset[int]
    capacity: Fraction


class _Dinic:
    def __init__(self, net: Network, ecap):
        self.net = net
        n = net.n_vertices
        self.to: list[int] = []
        self.cap: list[Fraction] = []
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.arc_edge: list[int] = []
        for arc in net.arcs:
            c = as_fraction(ecap.get(arc.id, 0))
            self.arc_edge.append(len(self.to))
            self._add_edge(arc.tail, arc.head, c)

    def _add_edge(self, u: int, v: int, c: Fraction):
        self.adj[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.adj[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(Fraction(0))

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * self.net.n_vertices
        self.level[s] = 0
        q = deque([s])
        while q:
            v = q.popleft()
            for eid in self.adj[v]:
                if self.cap[eid] > 0 and self.level[self.to[eid]] < 0:
                    self.level[self.to[eid]] = self.level[v] + 1
                    q.append(self.to[eid])
        return self.level[t] >= 0

    def _dfs(self, v: int, t: int, pushed: Fraction) -> Fraction:
        if v == t:
            return pushed
        while self.it[v] < len(self.adj[v]):
            eid = self.adj[v][self.it[v]]
            w = self.to[eid]
            if self.cap[eid] > 0 and self.level[w] == self.level[v] + 1:
                got = self._dfs(w, t, min(pushed, self.cap[eid]))
                if got > 0:
                    self.cap[eid] -= got
                    self.cap[eid ^ 1] += got
                    return got
            self.it[v] += 1
        return Fraction(0)

    def run(self, s: int, t: int, target) -> tuple[Fraction, bool]:
        total = Fraction(0)
        big = sum((c for c in self.cap if c > 0), Fraction(0)) + 1
        while self._bfs(s, t):
            self.it = [0] * self.net.n_vertices
            while True:
                got = self._dfs(s, t, big)
                if got <= 0:
                    break
                total += got
                if target is not None and total >= target:
                    return total, True
        return total, False

    def flows(self) -> dict[int, Fraction]:
        out = {}
        for arc in self.net.arcs:
            eid = self.arc_edge[arc.id]
            f = self.cap[eid ^ 1]  # reverse residual equals flow sent
            if f > 0:
                out[arc.id] = f
        return out


def max_flow(net: Network, ecap, s: int, t: int, target=None) -> FlowResult:
    """Maximum s-t flow under effective capacities, stopping early at ``target``.

    With a reachable target the result is any feasible flow of value >= target
    and ``terminated_early`` is set; otherwise the flow is maximum.
    """
    if s == t:
        raise ValueError("source equals sink")
    if target is not None:
        target = as_fraction(target)
    dinic = _Dinic(net, ecap)
    value, early = dinic.run(s, t, target)
    return FlowResult(dinic.flows(), value, early)


def _residual_forward_reach(net: Network, ecap, flow, s: int) -> set[int]:
    marked = {s}
    stack = [s]
    fl = lambda a: flow.get(a, Fraction(0))
    while stack:
        v = stack.pop()
        for arc in net.out_arcs[v]:
            cap = as_fraction(ecap.get(arc.id, 0))
            if cap - fl(arc.id) > 0 and arc.head not in marked:
                marked.add(arc.head)
                stack.append(arc.head)
        for arc in net.in_arcs[v]:
            if fl(arc.id) > 0 and arc.tail not in marked:
                marked.add(arc.tail)
                stack.append(arc.tail)
    return marked


def _residual_backward_reach(net: Network, ecap, flow, t: int) -> set[int]:
    """Vertices that can reach t in the residual graph."""
    marked = {t}
    stack = [t]
    fl = lambda a: flow.get(a, Fraction(0))
    while stack:
        v = stack.pop()
        for arc in net.in_arcs[v]:
            cap = as_fraction(ecap.get(arc.id, 0))
            if cap - fl(arc.id) > 0 and arc.tail not in marked:
                marked.add(arc.tail)
                stack.append(arc.tail)
        for arc in net.out_arcs[v]:
            if fl(arc.id) > 0 and arc.head not in marked:
                marked.add(arc.head)
                stack.append(arc.head)
    return marked


def extract_cut(
    net: Network, ecap, flow_result: FlowResult, s: int, t: int, side: str
) -> Cut:
    """Front or back minimum cut from the residual graph of a maximum flow.

    Front: mark residual-reachable vertices from s, then collect arcs uv with
    u marked and v on a backwards original-graph walk from t through unmarked
    vertices only.  Back is the same with the roles of s and t swapped and the
    searches run in the opposite directions.  Either arc set is the full
    boundary of a bipartition, and its capacity equals the max-flow value.
    """
    if flow_result.terminated_early:
        raise NotMaximum("flow was early-terminated; rerun without a target")
    if side not in ("front", "back"):
        raise ValueError("side must be 'front' or 'back'")
    flow = flow_result.flow
    if side == "front":
        marked = _residual_forward_reach(net, ecap, flow, s)
        # backwards DFS from t in the original graph through unmarked vertices
        reach = {t} - marked
        stack = list(reach)
        while stack:
            v = stack.pop()
            for arc in net.in_arcs[v]:
                u = arc.tail
                if u not in marked and u not in reach:
                    reach.add(u)
                    stack.append(u)
        cut = frozenset(
            a.id for a in net.arcs if a.tail in marked and a.head in reach
        )
    else:
        marked = _residual_backward_reach(net, ecap, flow, t)
        reach = {s} - marked
        stack = list(reach)
        while stack:
            v = stack.pop()
            for arc in net.out_arcs[v]:
                w = arc.head
                if w not in marked and w not in reach:
                    reach.add(w)
                    stack.append(w)
        cut = frozenset(
            a.id for a in net.arcs if a.tail in reach and a.head in marked
        )
    capacity = sum((as_fraction(ecap.get(a, 0)) for a in cut), Fraction(0))
    return Cut(cut, capacity)


def full_capacities(net: Network) -> dict[int, Fraction]:
    return {arc.id: arc.fcap for arc in net.arcs}


def all_pairs_maxflow(net: Network) -> dict[tuple[int, int], Fraction]:
    """lambda_G(s,t) for every ordered vertex pair under full capacities."""
    fcap = full_capacities(net)
    out: dict[tuple[int, int], Fraction] = {}
    for s in range(net.n_vertices):
        for t in range(net.n_vertices):
            if s == t:
                continue
            out[(s, t)] = max_flow(net, fcap, s, t).value
    return out
