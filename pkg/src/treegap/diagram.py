"""Edge-indexed graphs and finite-volume diagrams.

A graph is stored as vertices plus half-edges; every half-edge knows its
origin and its partner (the reversed half-edge).  The terminus of a
half-edge is the origin of its partner, so loops are simply two distinct
half-edges with the same origin.

All indices and measures are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class DiagramError(ValueError):
    """Base class for all diagram validation failures."""


class DanglingPartner(DiagramError):
    pass


class FixedPointInvolution(DiagramError):
    pass


class NonPositiveIndex(DiagramError):
    pass


class Disconnected(DiagramError):
    pass


class CycleInconsistent(DiagramError):
    """Some cycle has a product of index ratios different from 1."""

    def __init__(self, message: str, cycle: Sequence[str] = ()):
        super().__init__(message)
        self.cycle = tuple(cycle)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        num, sep, den = text.partition("/")
        try:
            if sep:
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational: {value!r}") from None
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


@dataclass(frozen=True)
class Vertex:
    id: str
    label: str | None = None
    boundary: bool = False


@dataclass(frozen=True)
class HalfEdge:
    id: str
    origin: str
    partner: str
    index: Fraction


@dataclass(frozen=True, eq=False)
class EdgeIndexedGraph:
    """An edge-indexed graph without a measure.

    Use :func:`build_graph` to construct a validated instance.
    """

    vertices: tuple[Vertex, ...]
    half_edges: tuple[HalfEdge, ...]

    @cached_property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(v.id for v in self.vertices)

    @cached_property
    def position(self) -> Mapping[str, int]:
        return MappingProxyType({v: n for n, v in enumerate(self.vertex_ids)})

    @cached_property
    def vertex(self) -> Mapping[str, Vertex]:
        return MappingProxyType({v.id: v for v in self.vertices})

    @cached_property
    def edge(self) -> Mapping[str, HalfEdge]:
        return MappingProxyType({e.id: e for e in self.half_edges})

    @cached_property
    def out_edges(self) -> Mapping[str, tuple[HalfEdge, ...]]:
        out: dict[str, list[HalfEdge]] = {v: [] for v in self.vertex_ids}
        for e in self.half_edges:
            out[e.origin].append(e)
        return MappingProxyType({v: tuple(es) for v, es in out.items()})

    @cached_property
    def boundary(self) -> frozenset[str]:
        return frozenset(v.id for v in self.vertices if v.boundary)

    def partner(self, e: HalfEdge | str) -> HalfEdge:
        e = self.edge[e] if isinstance(e, str) else e
        return self.edge[e.partner]

    def terminus(self, e: HalfEdge | str) -> str:
        return self.partner(e).origin

    def ratio(self, e: HalfEdge | str) -> Fraction:
        """i(e) / i(partner e): the factor by which the measure changes along e."""
        e = self.edge[e] if isinstance(e, str) else e
        return e.index / self.partner(e).index

    def indeg(self, x: str) -> Fraction:
        return sum((e.index for e in self.out_edges[x]), Fraction(0))

    def edge_pairs(self) -> list[tuple[HalfEdge, HalfEdge]]:
        """Each partner pair once, forward half-edge first, in declaration order."""
        seen: set[str] = set()
        pairs = []
        for e in self.half_edges:
            if e.id in seen:
                continue
            seen.add(e.id)
            seen.add(e.partner)
            pairs.append((e, self.edge[e.partner]))
        return pairs

    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.reachable(self.vertex_ids[0])) == len(self.vertices)

    def reachable(self, start: str) -> set[str]:
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for e in self.out_edges[x]:
                y = self.terminus(e)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return seen


@dataclass(frozen=True, eq=False)
class Diagram(EdgeIndexedGraph):
    """A connected edge-indexed graph together with its finite-volume measure.

    ``mu_vertex`` and ``mu_edge`` are derived from the base vertex and its
    mass by :func:`propagate_measure`; build instances with
    :func:`build_diagram` or :func:`from_edges`.
    """

    base: str = ""
    base_mass: Fraction = Fraction(1)
    mu_vertex: Mapping[str, Fraction] = field(default_factory=dict)
    mu_edge: Mapping[str, Fraction] = field(default_factory=dict)

    def mu(self, vertices: Iterable[str]) -> Fraction:
        return sum((self.mu_vertex[x] for x in vertices), Fraction(0))

    @cached_property
    def total_volume(self) -> Fraction:
        return self.mu(self.vertex_ids)


@dataclass(frozen=True)
class RegularityReport:
    indeg: Mapping[str, Fraction]
    is_k_regular: bool
    k: Fraction | None
    exempted: frozenset[str]


def _coerce_vertices(vertices: Iterable[Vertex | str]) -> tuple[Vertex, ...]:
    out = []
    for v in vertices:
        out.append(v if isinstance(v, Vertex) else Vertex(str(v)))
    return tuple(out)


def build_graph(vertices: Iterable[Vertex | str], half_edges: Iterable[HalfEdge]) -> EdgeIndexedGraph:
    """Validate the combinatorial structure (no measure, connectivity not required)."""
    verts = _coerce_vertices(vertices)
    hes = tuple(
        HalfEdge(e.id, e.origin, e.partner, as_fraction(e.index)) for e in half_edges
    )
    ids = [v.id for v in verts]
    if len(set(ids)) != len(ids):
        raise DiagramError("duplicate vertex id")
    he_ids = [e.id for e in hes]
    if len(set(he_ids)) != len(he_ids):
        raise DiagramError("duplicate half-edge id")
    vset = set(ids)
    by_id = {e.id: e for e in hes}
    for e in hes:
        if e.origin not in vset:
            raise DiagramError(f"half-edge {e.id} starts at unknown vertex {e.origin}")
        if e.partner == e.id:
            raise FixedPointInvolution(f"half-edge {e.id} is paired with itself")
        other = by_id.get(e.partner)
        if other is None or other.partner != e.id:
            raise DanglingPartner(f"half-edge {e.id} has no matching partner {e.partner}")
        if e.index <= 0:
            raise NonPositiveIndex(f"half-edge {e.id} has index {e.index}")
    return EdgeIndexedGraph(verts, hes)


def _tree_path(parent: dict[str, HalfEdge | None], graph: EdgeIndexedGraph, x: str) -> list[HalfEdge]:
    path = []
    while parent[x] is not None:
        e = parent[x]
        path.append(e)
        x = e.origin
    path.reverse()
    return path


def propagate_measure(
    graph: EdgeIndexedGraph, base: str, mass=1
) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
    """Spread the base mass along index ratios.

    Returns ``(mu_vertex, mu_edge)``.  Every non-tree edge met during the
    breadth-first walk is checked, so any inconsistent cycle is found and
    reported via :class:`CycleInconsistent`.
    """
    mass = as_fraction(mass)
    if base not in graph.position:
        raise DiagramError(f"base vertex {base!r} does not exist")
    if mass <= 0:
        raise DiagramError("base mass must be positive")
    mu = {base: mass}
    parent: dict[str, HalfEdge | None] = {base: None}
    queue = deque([base])
    while queue:
        x = queue.popleft()
        for e in graph.out_edges[x]:
            y = graph.terminus(e)
            value = mu[x] * graph.ratio(e)
            if y not in mu:
                mu[y] = value
                parent[y] = e
                queue.append(y)
            elif mu[y] != value:
                to_x = _tree_path(parent, graph, x)
                to_y = _tree_path(parent, graph, y)
                common = 0
                while common < min(len(to_x), len(to_y)) and to_x[common] is to_y[common]:
                    common += 1
                back = [graph.partner(h).id for h in reversed(to_y[common:])]
                cycle = [h.id for h in to_x[common:]] + [e.id] + back
                raise CycleInconsistent(
                    f"index ratios around cycle {cycle} multiply to {value / mu[y]}, not 1",
                    cycle,
                )
    if len(mu) != len(graph.vertices):
        missing = sorted(set(graph.vertex_ids) - set(mu))
        raise Disconnected(f"vertices not reachable from base: {missing[:5]}")
    mu_vertex = {x: mu[x] for x in graph.vertex_ids}
    mu_edge = {e.id: e.index * mu[e.origin] for e in graph.half_edges}
    return mu_vertex, mu_edge


def build_diagram(
    vertices: Iterable[Vertex | str],
    half_edges: Iterable[HalfEdge],
    base: str | None = None,
    mass=1,
) -> Diagram:
    graph = build_graph(vertices, half_edges)
    if not graph.vertices:
        raise DiagramError("a diagram needs at least one vertex")
    if base is None:
        base = graph.vertex_ids[0]
    mu_vertex, mu_edge = propagate_measure(graph, base, mass)
    for e in graph.half_edges:
        # both laws hold by construction; a failure here is a bug, not bad input
        assert mu_edge[e.id] == mu_edge[e.partner], e.id
    return Diagram(
        graph.vertices,
        graph.half_edges,
        base=base,
        base_mass=as_fraction(mass),
        mu_vertex=MappingProxyType(mu_vertex),
        mu_edge=MappingProxyType(mu_edge),
    )


def pair(eid: str, u: str, v: str, forward, backward) -> tuple[HalfEdge, HalfEdge]:
    """The two half-edges of edge ``eid`` from ``u`` to ``v``."""
    f, b = f"{eid}.f", f"{eid}.b"
    return (
        HalfEdge(f, u, b, as_fraction(forward)),
        HalfEdge(b, v, f, as_fraction(backward)),
    )


def edges_to_half_edges(edges: Iterable[tuple]) -> list[HalfEdge]:
    out: list[HalfEdge] = []
    for eid, u, v, fwd, bwd in edges:
        out.extend(pair(eid, u, v, fwd, bwd))
    return out


def from_edges(vertices, edges, base=None, mass=1) -> Diagram:
    """Build a diagram from ``(edge_id, from, to, i_forward, i_backward)`` tuples."""
    return build_diagram(vertices, edges_to_half_edges(edges), base, mass)


def graph_from_edges(vertices, edges) -> EdgeIndexedGraph:
    return build_graph(vertices, edges_to_half_edges(edges))


def regularity(graph: EdgeIndexedGraph) -> RegularityReport:
    indeg = {x: graph.indeg(x) for x in graph.vertex_ids}
    exempt = graph.boundary
    values = {indeg[x] for x in graph.vertex_ids if x not in exempt}
    k = values.pop() if len(values) == 1 else None
    regular = k is not None and k > 0
    return RegularityReport(MappingProxyType(indeg), regular, k if regular else None, exempt)


def total_volume(diagram: Diagram) -> Fraction:
    return diagram.total_volume


def rebase(diagram: Diagram, base: str) -> Diagram:
    """Same diagram, measure propagated from another vertex with its current mass."""
    return build_diagram(diagram.vertices, diagram.half_edges, base, diagram.mu_vertex[base])


def max_index_ratio(graph: EdgeIndexedGraph) -> Fraction:
    """sup over half-edges of i(partner e) / i(e)."""
    return max((1 / graph.ratio(e) for e in graph.half_edges), default=Fraction(1))

