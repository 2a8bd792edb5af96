import random
from fractions import Fraction

import pytest

from helpers import path, random_integer_diagram
from treegap.cover import (
    CoverTooLarge,
    NonIntegerIndex,
    covolume,
    fiber_counts,
    finite_grouping,
    interior_degrees,
    rational_lcm,
    universal_cover_ball,
)
from treegap.diagio import parse_graph
from treegap.diagram import from_edges, total_volume
from treegap.generators import gen_ray_blocks


def test_rational_lcm():
    assert rational_lcm([Fraction(1, 2), Fraction(1, 3)]) == 1
    assert rational_lcm([Fraction(3, 2), Fraction(5, 4)]) == Fraction(15, 2)
    assert rational_lcm([4, 6]) == 12


def test_grouping_two_measures():
    D = from_edges(["a", "b"], [("e", "a", "b", 2, 3)], mass=Fraction(1, 2))
    assert D.mu_vertex == {"a": Fraction(1, 2), "b": Fraction(1, 3)}
    G = finite_grouping(D)
    assert G.vertex_orders == {"a": 2, "b": 3}
    assert G.edge_orders == {"e.f": 1, "e.b": 1}


def test_grouping_is_minimal():
    D = from_edges(["a", "b", "c"], [("e", "a", "b", 2, 1), ("f", "b", "c", 3, 1)], mass=5)
    G = finite_grouping(D)
    from math import gcd

    assert gcd(*G.vertex_orders.values(), *G.edge_orders.values()) == 1


def test_grouping_realizes_indices_on_ray_blocks():
    D = gen_ray_blocks(q=2, N=1)
    G = finite_grouping(D)
    assert G.scale == 1
    assert sorted(G.vertex_orders.values()) == [2, 2, 2, 2, 2, 3, 4]
    for e in D.half_edges:
        assert G.index(D, e.id) == e.index
    assert covolume(G) == total_volume(D) == Fraction(37, 12)


@pytest.mark.parametrize("seed", range(10))
def test_covolume_times_scale_is_volume(seed):
    D = random_integer_diagram(random.Random(seed), 9, 3)
    G = finite_grouping(D)
    assert covolume(G) * G.scale == total_volume(D)


def test_non_integer_index_rejected():
    D = from_edges(["a", "b"], [("e", "a", "b", Fraction(3, 2), 1)])
    with pytest.raises(NonIntegerIndex):
        finite_grouping(D)
    with pytest.raises(NonIntegerIndex):
        universal_cover_ball(D, "a", 2)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_ray_blocks_unfold_to_regular_tree(q):
    D = gen_ray_blocks(q=q, N=3)
    R = 6 if q < 4 else 4
    cover = universal_cover_ball(D, "x0", R)
    # interior vertices whose projection is the truncation boundary see fewer edges
    inner = [x for x in cover.diagram.vertex_ids if cover.depth[x] < R and cover.projection[x] not in D.boundary]
    assert {len(cover.diagram.out_edges[x]) for x in inner} == {q + 1}
    assert fiber_counts(cover, D) == []


def test_path_unfolds_to_itself():
    D = path(5)
    cover = universal_cover_ball(D, "p0", 4)
    assert len(cover.diagram.vertices) == 5
    assert sorted(cover.projection.values()) == list(D.vertex_ids)


def test_loop_bouquet_gives_three_regular_ball():
    G = parse_graph("diag v1\nvertex v\nedge l v v 1 2\n")
    cover = universal_cover_ball(G, "v", 4)
    assert len(cover.diagram.vertices) == 46
    assert interior_degrees(cover) == {3: 22}
    assert fiber_counts(cover, G) == []


def test_cover_names_are_access_paths():
    G = parse_graph("diag v1\nvertex v\nedge l v v 1 2\n")
    cover = universal_cover_ball(G, "v", 1)
    assert sorted(cover.diagram.vertex_ids) == ["o", "o/l.b:0", "o/l.b:1", "o/l.f:0"]


def test_cover_budget():
    with pytest.raises(CoverTooLarge):
        universal_cover_ball(gen_ray_blocks(q=4, N=2), "x0", 8, max_vertices=1000)
    with pytest.raises(ValueError):
        universal_cover_ball(path(3), "p0", 0)
