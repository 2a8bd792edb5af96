"""Diagram families: the ray of blocks, cusped diagrams and tree balls."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .diagram import Diagram, Vertex, as_fraction, from_edges, regularity


@dataclass(frozen=True)
class RayBlocksSpec:
    q: int
    N: int
    truncation: str = "cut"

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be at least 2")
        if self.N < 1:
            raise ValueError("need at least one block")
        if self.truncation != "cut":
            raise ValueError("only the 'cut' truncation is supported")


def ray_vertex(m: int) -> str:
    return f"x{m}"


def block_vertices(n: int) -> list[str]:
    """Vertex ids of block D_n in path order x_1^(n), ..., x_{2n+1}^(n)."""
    return [f"d{n}_{j}" for j in range(1, 2 * n + 2)]


def _block_edges(n: int, q: int) -> list[tuple]:
    names = block_vertices(n)
    edges = []
    for m in range(1, 2 * n + 1):
        w = q if m % 2 == 0 else 1
        edges.append((f"b{n}_{m}", names[m - 1], names[m], w, w))
    return edges


def gen_ray_blocks(spec: RayBlocksSpec | None = None, *, q: int | None = None, N: int | None = None) -> Diagram:
    """The k-regular non-expander ``x0 - x1 - D1 - x2 - x3 - D2 - ...`` cut after block N.

    Each block D_n is a path on 2n+1 vertices whose internal indices are
    symmetric, so the whole block carries the measure of its neighbours on
    the ray.  The two attachment edges get the symmetric index that fills
    the in-degree gap at both of their endpoints.
    """
    if spec is None:
        spec = RayBlocksSpec(q, N)
    q, N = spec.q, spec.N
    k = q + 1
    vertices: list[Vertex] = [Vertex(ray_vertex(0)), Vertex(ray_vertex(1))]
    edges: list[tuple] = [("e0", ray_vertex(0), ray_vertex(1), q + 1, q)]
    # in-degree already committed at the two ray vertices next to each block
    ray_indeg = {ray_vertex(1): q}
    for n in range(1, N + 1):
        left, right = ray_vertex(2 * n - 1), ray_vertex(2 * n)
        names = block_vertices(n)
        inner = _block_edges(n, q)
        block_indeg = {x: 0 for x in names}
        for _, u, v, fwd, bwd in inner:
            block_indeg[u] += fwd
            block_indeg[v] += bwd
        ray_indeg[right] = 1  # the outgoing ray edge (x_{2n}, x_{2n+1})
        gaps = {x: k - block_indeg[x] for x in (names[0], names[-1])}
        need = {left: k - ray_indeg[left], right: k - ray_indeg[right]}
        # pair each ray vertex with the block end whose gap it matches
        light_end = names[-1] if gaps[names[-1]] == need[left] else names[0]
        heavy_end = names[0] if light_end == names[-1] else names[-1]
        if gaps[light_end] != need[left] or gaps[heavy_end] != need[right]:
            raise AssertionError(f"no symmetric attachment fills block {n}")
        vertices.extend(Vertex(x) for x in names)
        edges.append((f"a{n}", left, light_end, need[left], need[left]))
        edges.extend(inner)
        edges.append((f"h{n}", heavy_end, right, need[right], need[right]))
        nxt = ray_vertex(2 * n + 1)
        vertices.append(Vertex(right))
        vertices.append(Vertex(nxt, boundary=(n == N)))
        edges.append((f"r{2 * n}", right, nxt, 1, q))
        ray_indeg[nxt] = q
    diagram = from_edges(vertices, edges, base=ray_vertex(0), mass=Fraction(1, q + 1))
    report = regularity(diagram)
    if not report.is_k_regular or report.k != k:
        raise AssertionError("ray-of-blocks truncation is not interior k-regular")
    return diagram


@dataclass(frozen=True)
class RaySpec:
    attach: str
    length: int
    decay: int | Fraction = 2


@dataclass(frozen=True)
class CuspSpec:
    core_vertices: tuple[str, ...]
    core_edges: tuple[tuple, ...]
    rays: tuple[RaySpec, ...]
    base: str | None = None
    mass: int | Fraction = 1

    def __post_init__(self):
        for ray in self.rays:
            if as_fraction(ray.decay) < 2:
                raise ValueError("ray decay must be at least 2")
            if ray.length < 1:
                raise ValueError("ray length must be at least 1")
            if ray.attach not in self.core_vertices:
                raise ValueError(f"ray attaches to unknown core vertex {ray.attach}")


@dataclass(frozen=True)
class Cusp:
    """A cusped diagram with the certificate parameters it guarantees."""

    diagram: Diagram
    core: frozenset[str]
    c: Fraction
    d: Fraction


def ray_vertex_id(j: int, t: int) -> str:
    return f"r{j}_{t}"


def gen_cusp(spec: CuspSpec) -> Cusp:
    """Core graph plus rays whose measure drops by ``decay`` at every step.

    A ray step has forward index 1 and backward index d, so the edge from
    a ray vertex y back toward the core has measure d * mu(y).
    """
    vertices = [Vertex(x) for x in spec.core_vertices]
    edges = list(spec.core_edges)
    for j, ray in enumerate(spec.rays, start=1):
        prev = ray.attach
        d = as_fraction(ray.decay)
        for t in range(1, ray.length + 1):
            y = ray_vertex_id(j, t)
            vertices.append(Vertex(y, boundary=(t == ray.length)))
            edges.append((f"r{j}e{t}", prev, y, 1, d))
            prev = y
    diagram = from_edges(vertices, edges, base=spec.base or spec.core_vertices[0], mass=spec.mass)
    d = min((as_fraction(r.decay) for r in spec.rays), default=Fraction(2))
    return Cusp(diagram, frozenset(spec.core_vertices), c=d, d=d)


def cusp_family_spec(q: int, length: int) -> CuspSpec:
    """Default cusp: one core edge with a decaying ray hanging off each end."""
    return CuspSpec(
        core_vertices=("u", "v"),
        core_edges=(("c0", "u", "v", 1, 1),),
        rays=(RaySpec("u", length, q), RaySpec("v", length, q)),
    )


def tree_ball_adjacency(k0: int, k1: int, R: int) -> tuple[list[int], list[int], list[list[int]]]:
    """Breadth-first numbered ball of the (bi)regular tree.

    Returns ``(parent, depth, children)``; the root is 0 and has degree k0,
    vertices at odd depth have degree k1, at even depth k0.
    """
    if min(k0, k1) < 2 or R < 0:
        raise ValueError("need k0, k1 >= 2 and R >= 0")
    parent = [-1]
    depth = [0]
    children: list[list[int]] = [[]]
    frontier = [0]
    for r in range(R):
        nxt = []
        for x in frontier:
            deg = k0 if depth[x] % 2 == 0 else k1
            count = deg if x == 0 else deg - 1
            for _ in range(count):
                y = len(parent)
                parent.append(x)
                depth.append(r + 1)
                children.append([])
                children[x].append(y)
                nxt.append(y)
        frontier = nxt
    return parent, depth, children


def gen_tree_ball(k0: int, k1: int, R: int) -> Diagram:
    if R < 1:
        raise ValueError("radius must be at least 1")
    parent, depth, _ = tree_ball_adjacency(k0, k1, R)
    vertices = [Vertex(f"v{i}", boundary=(depth[i] == R)) for i in range(len(parent))]
    edges = [(f"t{i}", f"v{parent[i]}", f"v{i}", 1, 1) for i in range(1, len(parent))]
    return from_edges(vertices, edges, base="v0", mass=1)


def block_witnesses(diagram: Diagram, ns: Sequence[int] | None = None) -> dict[int, list[str]]:
    """Block vertex sets D_n present in a ray-of-blocks truncation."""
    out = {}
    n = 1
    while block_vertices(n)[0] in diagram.position:
        if ns is None or n in ns:
            out[n] = block_vertices(n)
        n += 1
    return out
