"""Finite groupings, covolume and universal-cover balls of edge-indexed graphs."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .diagram import Diagram, DiagramError, EdgeIndexedGraph, Vertex, from_edges


class NonIntegerIndex(DiagramError):
    pass


class CoverTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GraphOfGroups:
    """Orders of vertex and edge groups; ``vertex_orders[x] == scale / mu(x)``."""

    vertex_orders: Mapping[str, int]
    edge_orders: Mapping[str, int]
    scale: Fraction

    def index(self, diagram: EdgeIndexedGraph, e: str) -> Fraction:
        """Recover i(e) as the index of the edge group in the vertex group."""
        return Fraction(self.vertex_orders[diagram.edge[e].origin], self.edge_orders[e])


def _require_integer_indices(graph: EdgeIndexedGraph) -> None:
    for e in graph.half_edges:
        if e.index.denominator != 1:
            raise NonIntegerIndex(f"half-edge {e.id} has index {e.index}")


def rational_lcm(values) -> Fraction:
    """Smallest positive rational that is an integer multiple of every value."""
    values = [Fraction(v) for v in values]
    return Fraction(
        math.lcm(*(v.numerator for v in values)),
        math.gcd(*(v.denominator for v in values)),
    )


def finite_grouping(diagram: Diagram) -> GraphOfGroups:
    """Minimal integer group orders realizing the indices of ``diagram``.

    The scale is the least common multiple of all vertex and edge measures,
    so every order ``scale / mu`` is a positive integer and no smaller
    uniform scale works.
    """
    _require_integer_indices(diagram)
    scale = rational_lcm(list(diagram.mu_vertex.values()) + list(diagram.mu_edge.values()))
    vertex_orders = {x: int(scale / m) for x, m in diagram.mu_vertex.items()}
    edge_orders = {e: int(scale / m) for e, m in diagram.mu_edge.items()}
    for e in diagram.half_edges:
        if vertex_orders[e.origin] != e.index * edge_orders[e.id]:
            raise AssertionError(f"grouping does not realize index of {e.id}")
    return GraphOfGroups(vertex_orders, edge_orders, scale)


def covolume(grouping: GraphOfGroups) -> Fraction:
    return sum((Fraction(1, n) for n in grouping.vertex_orders.values()), Fraction(0))


@dataclass(frozen=True, eq=False)
class CoverBall:
    diagram: Diagram
    projection: Mapping[str, str]  # cover vertex -> vertex of the base graph
    lifted_edge: Mapping[str, str]  # cover vertex -> base half-edge it was entered along
    depth: Mapping[str, int]
    radius: int


ROOT = "o"


def universal_cover_ball(graph: EdgeIndexedGraph, base: str, R: int, max_vertices: int = 2_000_000) -> CoverBall:
    """Radius-R ball of the universal cover around a lift of ``base``.

    A vertex over v that was entered along a lift of e gets i(e') neighbours
    over each half-edge e' out of v, except that the parent already
    accounts for one lift of the reverse of e.  Children are named by their
    access path, so the output is deterministic.
    """
    _require_integer_indices(graph)
    if R < 1:
        raise ValueError("radius must be at least 1")
    if base not in graph.position:
        raise DiagramError(f"unknown base vertex {base!r}")
    projection = {ROOT: base}
    lifted: dict[str, str] = {}
    depth = {ROOT: 0}
    parent: dict[str, str] = {}
    frontier = [ROOT]
    for r in range(R):
        nxt = []
        for node in frontier:
            v = projection[node]
            back = graph.edge[lifted[node]].partner if node in lifted else None
            for e in graph.out_edges[v]:
                count = int(e.index) - (1 if e.id == back else 0)
                for copy in range(count):
                    child = f"{node}/{e.id}:{copy}"
                    projection[child] = graph.terminus(e)
                    lifted[child] = e.id
                    depth[child] = r + 1
                    parent[child] = node
                    nxt.append(child)
            if len(projection) > max_vertices:
                raise CoverTooLarge(f"cover ball exceeds {max_vertices} vertices")
        frontier = nxt
    vertices = [Vertex(x, label=projection[x], boundary=(depth[x] == R)) for x in projection]
    edges = [(f"c{n}", parent[x], x, 1, 1) for n, x in enumerate(projection) if x != ROOT]
    tree = from_edges(vertices, edges, base=ROOT, mass=1)
    return CoverBall(tree, projection, lifted, depth, R)


def interior_degrees(cover: CoverBall) -> Counter:
    tree = cover.diagram
    return Counter(len(tree.out_edges[x]) for x in tree.vertex_ids if cover.depth[x] < cover.radius)


def fiber_counts(cover: CoverBall, graph: EdgeIndexedGraph) -> list[tuple[str, str, int, Fraction]]:
    """Interior cover vertices where lifts over some half-edge do not number i(e).

    Returns the mismatches as ``(cover vertex, half-edge, count, index)``; an
    empty list means the projection is a local covering of edge-indexed graphs.
    """
    tree = cover.diagram
    bad = []
    for x in tree.vertex_ids:
        if cover.depth[x] >= cover.radius:
            continue
        counts: Counter = Counter()
        for e in tree.out_edges[x]:
            y = tree.terminus(e)
            if cover.depth[y] > cover.depth[x]:
                counts[cover.lifted_edge[y]] += 1
            else:
                counts[graph.edge[cover.lifted_edge[x]].partner] += 1
        for e in graph.out_edges[cover.projection[x]]:
            if counts[e.id] != e.index:
                bad.append((x, e.id, counts[e.id], e.index))
    return bad
