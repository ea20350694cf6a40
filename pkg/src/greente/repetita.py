"""REPETITA topology/demand ingestion and instance preprocessing.

Graph files::

    NODES <n>
    label x y
    <label> <x> <y>          (n lines)

    EDGES <m>
    label src dest weight bw delay
    <label> <src> <dest> <weight> <bw> <delay>

Demand files::

    DEMANDS <k>
    label src dest bw
    <label> <src> <dest> <bw>

Preprocessing merges parallel arcs (capacities add, weights take the min),
applies the requested length mode and per-link connection count, and scales
the matrix so the fully active network runs at a maximum utilization of
exactly one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    FULL_DUPLEX,
    Network,
    SIMPLEX,
    TrafficMatrix,
    build_network,
    full_activation,
    scale_traffic,
)
from .routing import Disconnected, mlu, spr_route

LENGTH_MODES = ("asGiven", "unit", "inverseCapacity")


class ParseError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownNode(ValueError):
    pass


class DisconnectedDemand(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphPrecursor:
    """Parsed topology before preprocessing; parallel edges are preserved."""

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, int, int, int, Fraction], ...]  # label, src, dst, weight, bw


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line:
            yield lineno, line


def parse_repetita_graph(text: str) -> GraphPrecursor:
    lines = _content_lines(text)

    def next_line(what: str):
        try:
            return next(lines)
        except StopIteration:
            raise ParseError(f"unexpected end of file, expected {what}", 0) from None

    lineno, line = next_line("NODES header")
    parts = line.split()
    if len(parts) != 2 or parts[0].upper() != "NODES":
        raise ParseError("expected 'NODES <count>'", lineno)
    try:
        n_nodes = int(parts[1])
    except ValueError:
        raise ParseError("node count is not an integer", lineno) from None
    next_line("node column header")  # column header line
    nodes = []
    for _ in range(n_nodes):
        lineno, line = next_line("node line")
        fields = line.split()
        if len(fields) != 3:
            raise ParseError("expected '<label> <x> <y>'", lineno)
        nodes.append(fields[0])
    lineno, line = next_line("EDGES header")
    parts = line.split()
    if len(parts) != 2 or parts[0].upper() != "EDGES":
        raise ParseError("expected 'EDGES <count>'", lineno)
    try:
        n_edges = int(parts[1])
    except ValueError:
        raise ParseError("edge count is not an integer", lineno) from None
    next_line("edge column header")
    edges = []
    for _ in range(n_edges):
        lineno, line = next_line("edge line")
        fields = line.split()
        if len(fields) != 6:
            raise ParseError("expected '<label> <src> <dest> <weight> <bw> <delay>'", lineno)
        label = fields[0]
        try:
            src, dst = int(fields[1]), int(fields[2])
            weight = int(fields[3])
            bw = Fraction(fields[4])
        except ValueError:
            raise ParseError("malformed edge fields", lineno) from None
        if not 0 <= src < n_nodes or not 0 <= dst < n_nodes:
            raise ParseError(f"edge endpoint out of range on edge {label}", lineno)
        edges.append((label, src, dst, weight, bw))
    return GraphPrecursor(tuple(nodes), tuple(edges))


def parse_repetita_demands(text: str, num_nodes: int | None = None) -> TrafficMatrix:
    """Demands summed per ordered pair; zero-volume lines drop out."""
    lines = _content_lines(text)
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError("empty demand file", 0) from None
    parts = line.split()
    if len(parts) != 2 or parts[0].upper() != "DEMANDS":
        raise ParseError("expected 'DEMANDS <count>'", lineno)
    try:
        count = int(parts[1])
    except ValueError:
        raise ParseError("demand count is not an integer", lineno) from None
    try:
        next(lines)
    except StopIteration:
        raise ParseError("missing demand column header", lineno) from None
    demands: dict[tuple[int, int], Fraction] = {}
    for _ in range(count):
        try:
            lineno, line = next(lines)
        except StopIteration:
            raise ParseError("unexpected end of file in demand list", 0) from None
        fields = line.split()
        if len(fields) != 4:
            raise ParseError("expected '<label> <src> <dest> <bw>'", lineno)
        try:
            src, dst = int(fields[1]), int(fields[2])
            bw = Fraction(fields[3])
        except ValueError:
            raise ParseError("malformed demand fields", lineno) from None
        if num_nodes is not None and not (0 <= src < num_nodes and 0 <= dst < num_nodes):
            raise UnknownNode(f"demand endpoint {src}->{dst} outside the topology")
        if src != dst and bw > 0:
            demands[(src, dst)] = demands.get((src, dst), Fraction(0)) + bw
    return TrafficMatrix(demands)


def merge_parallel_edges(precursor: GraphPrecursor) -> dict[tuple[int, int], tuple[int, Fraction]]:
    """Per ordered pair: (min weight, summed bandwidth)."""
    merged: dict[tuple[int, int], tuple[int, Fraction]] = {}
    for _, src, dst, weight, bw in precursor.edges:
        if (src, dst) in merged:
            w0, b0 = merged[(src, dst)]
            merged[(src, dst)] = (min(w0, weight), b0 + bw)
        else:
            merged[(src, dst)] = (weight, bw)
    return merged


def preprocess(
    precursor: GraphPrecursor,
    traffic: TrafficMatrix,
    duplex_mode: str = SIMPLEX,
    length_mode: str = "asGiven",
    mu: int = 1,
) -> tuple[Network, TrafficMatrix]:
    """Build the benchmark network and normalize traffic to a full-network
    utilization of exactly one."""
    if length_mode not in LENGTH_MODES:
        raise ValueError(f"unknown length mode {length_mode!r}")
    if mu < 1:
        raise ValueError("mu must be >= 1")
    merged = merge_parallel_edges(precursor)
    if duplex_mode == FULL_DUPLEX:
        harmonized = {}
        for (src, dst), (weight, bw) in merged.items():
            back = merged.get((dst, src))
            min_weight = weight if back is None else min(weight, back[0])
            harmonized[(src, dst)] = (min_weight, bw)
        merged = harmonized
    max_fcap = max(bw for _, bw in merged.values())
    specs = []
    for (src, dst), (weight, bw) in sorted(merged.items()):
        if length_mode == "unit":
            length = 1
        elif length_mode == "inverseCapacity":
            length = int(-(-max_fcap // bw))  # ceil(C_max / fcap), positive integer
        else:
            length = weight
        specs.append((src, dst, bw / mu, length, mu))
    net = build_network(specs, duplex_mode, vertices=precursor.nodes)
    for (s, t) in traffic.terminals:
        if not (0 <= s < net.n_vertices and 0 <= t < net.n_vertices):
            raise UnknownNode(f"demand endpoint {s}->{t} outside the topology")
    try:
        spr_route(net, full_activation(net), traffic)
    except Disconnected as exc:
        raise DisconnectedDemand(str(exc)) from exc
    utilization = mlu(net, full_activation(net), traffic)
    if utilization > 0:
        traffic = scale_traffic(traffic, Fraction(1) / utilization)
    return net, traffic
