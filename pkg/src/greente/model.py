"""Network, traffic, and activation data model shared by all solvers.

Capacities and demands are exact rationals (:class:`fractions.Fraction`);
lengths and connection counts are positive integers.  Vertex and arc ids are
dense integers assigned in input order, so all tie-breaking downstream is
deterministic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

Rational = Union[int, Fraction]


class NetworkError(ValueError):
    """Base class for network construction/validation failures."""


class DuplicateArc(NetworkError):
    pass


class MissingReverseArc(NetworkError):
    pass


class NonPositiveParameter(NetworkError):
    pass


class InconsistentDuplexArc(NetworkError):
    """Paired full-duplex arcs disagree on ccap or mu."""


SIMPLEX = "simplex"
FULL_DUPLEX = "full-duplex"


def as_fraction(value) -> Fraction:
    """Exact conversion to Fraction (floats convert to their exact value)."""
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Arc:
    """One directed link: ``mu`` connections of ``ccap`` capacity units each."""

    id: int
    tail: int
    head: int
    ccap: Fraction
    length: int
    mu: int

    @property
    def fcap(self) -> Fraction:
        return self.ccap * self.mu


@dataclass(frozen=True)
class Network:
    vertex_names: tuple[str, ...]
    arcs: tuple[Arc, ...]
    duplex_mode: str = SIMPLEX
    link_pair: tuple[int, ...] | None = None  # arc id -> reverse arc id

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @property
    def n_arcs(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_arcs(self) -> tuple[tuple[Arc, ...], ...]:
        buckets: list[list[Arc]] = [[] for _ in range(self.n_vertices)]
        for arc in self.arcs:
            buckets[arc.tail].append(arc)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def in_arcs(self) -> tuple[tuple[Arc, ...], ...]:
        buckets: list[list[Arc]] = [[] for _ in range(self.n_vertices)]
        for arc in self.arcs:
            buckets[arc.head].append(arc)
        return tuple(tuple(b) for b in buckets)

    @cached_property
    def arc_by_pair(self) -> dict[tuple[int, int], Arc]:
        return {(a.tail, a.head): a for a in self.arcs}

    def reverse_of(self, arc_id: int) -> int | None:
        if self.link_pair is None:
            return None
        return self.link_pair[arc_id]

    def vertex_id(self, name: str) -> int:
        return self.vertex_names.index(name)


@dataclass(frozen=True)
class TrafficMatrix:
    """Nonnegative demand per ordered terminal pair; zero entries are dropped."""

    demands: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        clean = {}
        for (s, t), d in self.demands.items():
            d = as_fraction(d)
            if d < 0:
                raise ValueError(f"negative demand for pair ({s},{t})")
            if s == t:
                raise ValueError(f"self-demand at vertex {s}")
            if d > 0:
                clean[(s, t)] = d
        object.__setattr__(self, "demands", clean)

    @property
    def terminals(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.demands))

    def demand(self, s: int, t: int) -> Fraction:
        return self.demands.get((s, t), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, TrafficMatrix) and dict(self.demands) == dict(other.demands)


@dataclass(frozen=True)
class Activation:
    """Per-arc count of active connections; the universal solution type."""

    counts: tuple[int, ...]

    @property
    def value(self) -> int:
        return sum(self.counts)

    def validate(self, net: Network) -> None:
        if len(self.counts) != net.n_arcs:
            raise ValueError("activation length does not match arc count")
        for arc in net.arcs:
            chi = self.counts[arc.id]
            if not 0 <= chi <= arc.mu:
                raise ValueError(f"chi({arc.id})={chi} outside [0,{arc.mu}]")
        if net.duplex_mode == FULL_DUPLEX:
            assert net.link_pair is not None
            for arc in net.arcs:
                if self.counts[arc.id] != self.counts[net.link_pair[arc.id]]:
                    raise ValueError(f"duplex asymmetry on arc {arc.id}")

    def with_count(self, arc_id: int, chi: int) -> "Activation":
        counts = list(self.counts)
        counts[arc_id] = chi
        return Activation(tuple(counts))


def build_network(
    arc_specs: Sequence[tuple],
    duplex_mode: str = SIMPLEX,
    vertices: Iterable[str] | None = None,
) -> Network:
    """Validate arc specs ``(tail, head, ccap, length, mu)`` into a Network.

    Vertices may be referenced by name or integer id; unseen names are
    assigned dense ids in first-appearance order unless ``vertices`` fixes
    the order up front.  In full-duplex mode every arc must have a reverse
    partner; disagreeing lengths harmonize to the minimum, disagreeing
    ccap/mu are rejected.
    """
    if duplex_mode not in (SIMPLEX, FULL_DUPLEX):
        raise ValueError(f"unknown duplex mode {duplex_mode!r}")
    if not arc_specs:
        raise NetworkError("empty arc list")

    names: list[str] = []
    index: dict[str, int] = {}
    if vertices is None and all(
        isinstance(spec[0], int) and isinstance(spec[1], int) for spec in arc_specs
    ):
        # bare integer endpoints are literal vertex ids
        top = max(max(spec[0], spec[1]) for spec in arc_specs)
        vertices = [str(i) for i in range(top + 1)]
    if vertices is not None:
        for name in vertices:
            name = str(name)
            if name in index:
                raise NetworkError(f"duplicate vertex {name!r}")
            index[name] = len(names)
            names.append(name)
    explicit = vertices is not None

    def vid(ref) -> int:
        if isinstance(ref, int) and explicit:
            if not 0 <= ref < len(names):
                raise NetworkError(f"vertex id {ref} out of range")
            return ref
        name = str(ref)
        if name not in index:
            if explicit:
                raise NetworkError(f"unknown vertex {name!r}")
            index[name] = len(names)
            names.append(name)
        return index[name]

    raw: list[tuple[int, int, Fraction, int, int]] = []
    seen_pairs: dict[tuple[int, int], int] = {}
    for spec in arc_specs:
        tail_ref, head_ref, ccap, length, mu = spec
        tail, head = vid(tail_ref), vid(head_ref)
        if tail == head:
            raise NetworkError(f"self-loop arc at vertex {tail}")
        ccap = as_fraction(ccap)
        if ccap <= 0:
            raise NonPositiveParameter(f"ccap must be positive on arc {tail}->{head}")
        if int(length) != length or length < 1:
            raise NonPositiveParameter(f"length must be a positive integer on arc {tail}->{head}")
        if int(mu) != mu or mu < 1:
            raise NonPositiveParameter(f"mu must be a positive integer on arc {tail}->{head}")
        if (tail, head) in seen_pairs:
            raise DuplicateArc(f"parallel arc {tail}->{head}")
        seen_pairs[(tail, head)] = len(raw)
        raw.append((tail, head, ccap, int(length), int(mu)))

    link_pair: tuple[int, ...] | None = None
    if duplex_mode == FULL_DUPLEX:
        pairing = []
        harmonized = []
        for i, (tail, head, ccap, length, mu) in enumerate(raw):
            j = seen_pairs.get((head, tail))
            if j is None:
                raise MissingReverseArc(f"arc {tail}->{head} lacks a reverse partner")
            rt, rh, rccap, rlength, rmu = raw[j]
            if rccap != ccap or rmu != mu:
                raise InconsistentDuplexArc(
                    f"arcs {tail}->{head} / {head}->{tail} disagree on ccap or mu"
                )
            pairing.append(j)
            harmonized.append((tail, head, ccap, min(length, rlength), mu))
        raw = harmonized
        link_pair = tuple(pairing)

    arcs = tuple(
        Arc(id=i, tail=t, head=h, ccap=c, length=l, mu=m)
        for i, (t, h, c, l, m) in enumerate(raw)
    )
    return Network(tuple(names), arcs, duplex_mode, link_pair)


def full_activation(net: Network) -> Activation:
    """All connections on: chi(a) = mu(a)."""
    return Activation(tuple(arc.mu for arc in net.arcs))


def zero_activation(net: Network) -> Activation:
    return Activation((0,) * net.n_arcs)


def scale_traffic(traffic: TrafficMatrix, factor: Rational) -> TrafficMatrix:
    factor = as_fraction(factor)
    if factor <= 0:
        raise ValueError("scale factor must be positive")
    return TrafficMatrix({pair: d * factor for pair, d in traffic.demands.items()})
