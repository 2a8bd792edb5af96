from fractions import Fraction

import pytest

from treegap.cheeger import boundary_measure
from treegap.cover import universal_cover_ball
from treegap.diagram import regularity, total_volume
from treegap.generators import (
    CuspSpec,
    RaySpec,
    RayBlocksSpec,
    block_vertices,
    gen_cusp,
    gen_ray_blocks,
    gen_tree_ball,
    ray_vertex,
    ray_vertex_id,
)
from treegap.hecke import sphere_size


def test_ray_blocks_q2_N2():
    D = gen_ray_blocks(q=2, N=2)
    assert len(D.vertices) == 14
    assert D.boundary == {"x5"}
    assert D.mu(block_vertices(1)) == Fraction(3, 2)
    assert D.mu(block_vertices(2)) == Fraction(5, 4)
    assert [D.mu_vertex[ray_vertex(m)] for m in (0, 1, 3)] == [Fraction(1, 3), Fraction(1, 2), Fraction(1, 4)]


def test_ray_blocks_q3_regular():
    rep = regularity(gen_ray_blocks(q=3, N=3))
    assert rep.is_k_regular and rep.k == 4
    assert all(v == 4 for x, v in rep.indeg.items() if x not in rep.exempted)


def test_attachment_indices():
    q = 4
    D = gen_ray_blocks(q=q, N=2)
    # light attachment at the odd ray vertex, heavy one at the next even vertex
    assert D.edge["a2.f"].origin == "x3" and D.edge["a2.f"].index == D.edge["a2.b"].index == 1
    assert D.edge["h2.b"].origin == "x4" and D.edge["h2.f"].index == D.edge["h2.b"].index == q


def test_bad_specs():
    with pytest.raises(ValueError):
        RayBlocksSpec(1, 3)
    with pytest.raises(ValueError):
        RayBlocksSpec(2, 0)
    with pytest.raises(ValueError):
        CuspSpec(("a",), (), (RaySpec("a", 3, 1),))


@pytest.mark.parametrize("q", range(2, 7))
@pytest.mark.parametrize("N", range(1, 11))
def test_ray_blocks_always_validate(q, N):
    D = gen_ray_blocks(q=q, N=N)
    for e in D.half_edges:
        assert D.mu_edge[e.id] == D.mu_edge[e.partner]
    for n in range(1, N + 1):
        assert boundary_measure(D, block_vertices(n)).ratio == Fraction(q + 1, 2 * n + 1)


def test_cusp_single_vertex_core():
    cusp = gen_cusp(CuspSpec(("o",), (), (RaySpec("o", 5, 2),)))
    D = cusp.diagram
    assert [D.mu_vertex[ray_vertex_id(1, t)] for t in range(1, 6)] == [Fraction(1, 2**t) for t in range(1, 6)]
    assert total_volume(D) == 1 + sum(Fraction(1, 2**t) for t in range(1, 6)) == 2 - Fraction(1, 32)
    assert D.boundary == {ray_vertex_id(1, 5)}
    assert (cusp.c, cusp.d) == (2, 2)


def test_cusp_single_step_tail_ratio():
    d = 3
    D = gen_cusp(CuspSpec(("o", "p"), (("c", "o", "p", 1, 1),), (RaySpec("p", 1, d),))).diagram
    assert boundary_measure(D, [ray_vertex_id(1, 1)]).ratio == d


def test_tree_ball_counts():
    assert len(gen_tree_ball(3, 3, 2).vertices) == 10
    ball = gen_tree_ball(3, 4, 2)
    assert len(ball.vertices) == 13 == sum(sphere_size(3, 4, n) for n in range(3))


def test_tree_ball_interior_degree():
    D = gen_tree_ball(3, 3, 4)
    assert {len(D.out_edges[x]) for x in D.vertex_ids if x not in D.boundary} == {3}


@pytest.mark.parametrize("k", [3, 4])
def test_tree_ball_is_its_own_cover(k):
    R = 3
    ball = gen_tree_ball(k, k, R)
    cover = universal_cover_ball(ball, ball.base, R)
    assert len(cover.diagram.vertices) == len(ball.vertices)
    # the projection is a bijection preserving distance from the centre
    assert sorted(cover.projection.values()) == sorted(ball.vertex_ids)
    ball_depth = _depths(ball)
    assert all(ball_depth[v] == cover.depth[x] for x, v in cover.projection.items())


def _depths(D):
    depth = {D.base: 0}
    frontier = [D.base]
    while frontier:
        nxt = []
        for x in frontier:
            for e in D.out_edges[x]:
                y = D.terminus(e)
                if y not in depth:
                    depth[y] = depth[x] + 1
                    nxt.append(y)
        frontier = nxt
    return depth
