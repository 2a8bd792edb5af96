"""Shared builders for the test-suite."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

from treegap.cheeger import boundary_measure
from treegap.diagram import from_edges


def two_vertex():
    return from_edges(["u", "v"], [("e", "u", "v", 1, 1)], base="u", mass=1)


def cycle(n: int):
    names = [f"c{j}" for j in range(n)]
    edges = [(f"e{j}", names[j], names[(j + 1) % n], 1, 1) for j in range(n)]
    return from_edges(names, edges)


def path(n: int):
    names = [f"p{j}" for j in range(n)]
    return from_edges(names, [(f"e{j}", names[j], names[j + 1], 1, 1) for j in range(n - 1)])


def random_integer_diagram(rng: random.Random, n: int, extra: int = 0):
    """Connected diagram with integer indices built from random group orders.

    Edge groups get orders in {1, 2, 3}; a vertex group order is a multiple
    of the orders of all incident edge groups, so i(e) = n_x / n_e is an
    integer and every cycle is consistent.
    """
    names = [f"v{j}" for j in range(n)]
    pairs = [(rng.randrange(j), j) for j in range(1, n)]
    for _ in range(extra):
        a, b = rng.sample(range(n), 2)
        pairs.append((a, b))
    edge_order = [rng.choice([1, 2, 3]) for _ in pairs]
    vertex_order = [1] * n
    for (a, b), m in zip(pairs, edge_order):
        vertex_order[a] = math.lcm(vertex_order[a], m)
        vertex_order[b] = math.lcm(vertex_order[b], m)
    vertex_order = [o * rng.choice([1, 1, 2]) for o in vertex_order]
    edges = [
        (f"e{j}", names[a], names[b], vertex_order[a] // m, vertex_order[b] // m)
        for j, ((a, b), m) in enumerate(zip(pairs, edge_order))
    ]
    return from_edges(names, edges, base=names[0], mass=Fraction(1, vertex_order[0]))


def brute_force_cheeger(diagram):
    """Smallest feasible ratio by direct enumeration with exact boundary sums."""
    ids = diagram.vertex_ids
    best = None
    for size in range(1, len(ids)):
        for S in combinations(ids, size):
            cut = boundary_measure(diagram, S)
            if cut.feasible and (best is None or cut.ratio < best):
                best = cut.ratio
    return best
