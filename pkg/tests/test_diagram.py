import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_integer_diagram, two_vertex
from treegap.diagram import (
    CycleInconsistent,
    DanglingPartner,
    Disconnected,
    FixedPointInvolution,
    HalfEdge,
    NonPositiveIndex,
    Vertex,
    build_diagram,
    build_graph,
    from_edges,
    propagate_measure,
    rebase,
    regularity,
    total_volume,
)
from treegap.generators import block_vertices, gen_ray_blocks


def test_two_vertex_symmetric():
    D = two_vertex()
    assert D.mu_vertex == {"u": 1, "v": 1}
    assert set(D.mu_edge.values()) == {1}


def test_ray_blocks_truncated_after_first_block():
    D = gen_ray_blocks(q=2, N=1)
    assert D.mu_vertex["x0"] == Fraction(1, 3)
    assert D.mu_vertex["x1"] == Fraction(1, 2)


def test_triangle_with_bad_cycle():
    with pytest.raises(CycleInconsistent) as info:
        from_edges("abc", [("e1", "a", "b", 2, 1), ("e2", "b", "c", 1, 1), ("e3", "c", "a", 1, 1)])
    assert len(info.value.cycle) == 3


def test_loop_with_asymmetric_indices_has_no_measure():
    with pytest.raises(CycleInconsistent):
        from_edges(["v"], [("l", "v", "v", 1, 2)])


def test_symmetric_loop_is_accepted():
    D = from_edges(["v", "w"], [("l", "v", "v", 2, 2), ("e", "v", "w", 1, 1)])
    assert D.indeg("v") == 5
    assert D.mu_edge["l.f"] == D.mu_edge["l.b"] == 2


def test_structural_errors():
    with pytest.raises(DanglingPartner):
        build_graph(["a"], [HalfEdge("e", "a", "f", Fraction(1))])
    with pytest.raises(FixedPointInvolution):
        build_graph(["a"], [HalfEdge("e", "a", "e", Fraction(1))])
    with pytest.raises(NonPositiveIndex):
        from_edges(["a", "b"], [("e", "a", "b", 0, 1)])
    with pytest.raises(Disconnected):
        from_edges(["a", "b", "c"], [("e", "a", "b", 1, 1)])


def test_dangling_when_partner_points_elsewhere():
    hes = [
        HalfEdge("e", "a", "f", Fraction(1)),
        HalfEdge("f", "b", "g", Fraction(1)),
        HalfEdge("g", "b", "f", Fraction(1)),
    ]
    with pytest.raises(DanglingPartner):
        build_graph(["a", "b"], hes)


def test_propagation_q3_by_hand():
    q = 3
    D = gen_ray_blocks(q=q, N=3)
    # walk x0 -> x1 -> D1 -> x2 -> x3 edge by edge, multiplying i(e)/i(reverse)
    walk = ["e0.f", "a1.f", "b1_2.b", "b1_1.b", "h1.f", "r2.f"]
    mu = Fraction(1, q + 1)
    here = "x0"
    for eid in walk:
        e = D.edge[eid]
        assert e.origin == here
        back = D.edge[e.partner]
        mu *= e.index / back.index
        here = back.origin
    assert here == "x3"
    assert mu == D.mu_vertex["x3"] == Fraction(1, q**2)


def test_symmetric_indices_give_constant_measure():
    D = from_edges("abcd", [("e1", "a", "b", 3, 3), ("e2", "b", "c", 2, 2), ("e3", "c", "a", 1, 1), ("e4", "c", "d", 5, 5)], mass=Fraction(7, 2))
    assert set(D.mu_vertex.values()) == {Fraction(7, 2)}


def test_regularity_interior_vertex():
    rep = regularity(gen_ray_blocks(q=2, N=3))
    assert rep.indeg["d2_3"] == 3
    assert rep.is_k_regular and rep.k == 3
    assert rep.exempted == {"x7"}
    assert rep.indeg["x7"] == 2


def test_regularity_isolated_vertex():
    D = build_diagram([Vertex("a")], [])
    rep = regularity(D)
    assert rep.indeg["a"] == 0
    assert not rep.is_k_regular


def test_block_volume():
    D = gen_ray_blocks(q=2, N=2)
    assert D.mu(block_vertices(2)) == Fraction(5, 4)
    assert total_volume(two_vertex()) == 2


def test_total_volume_term_by_term():
    q, N = 2, 4
    D = gen_ray_blocks(q=q, N=N)
    terms = [Fraction(1, q + 1)]
    terms += [Fraction(1, q**m) for m in range(1, N + 2)]  # x_{2m-1}
    terms += [Fraction(1, q ** (m - 1)) for m in range(2, N + 2)]  # x_{2m-2}
    terms += [Fraction(2 * n + 1, q**n) for n in range(1, N + 1)]
    assert len(terms) == 1 + (N + 1) + N + N
    assert total_volume(D) == sum(terms)


def test_propagate_measure_standalone():
    D = gen_ray_blocks(q=2, N=2)
    graph = build_graph(D.vertices, D.half_edges)
    mu_v, mu_e = propagate_measure(graph, "x0", Fraction(1, 3))
    assert mu_v == dict(D.mu_vertex)
    assert mu_e == dict(D.mu_edge)


diagrams = st.builds(
    lambda seed, n, extra: random_integer_diagram(random.Random(seed), n, extra),
    st.integers(0, 10**6),
    st.integers(2, 14),
    st.integers(0, 5),
)


@settings(max_examples=60, deadline=None)
@given(diagrams)
def test_measure_laws_hold_exactly(D):
    for e in D.half_edges:
        assert D.mu_edge[e.id] == e.index * D.mu_vertex[e.origin]
        assert D.mu_edge[e.id] == D.mu_edge[e.partner]


@settings(max_examples=40, deadline=None)
@given(diagrams, st.data())
def test_rebasing_reproduces_measure(D, data):
    y = data.draw(st.sampled_from(D.vertex_ids))
    R = rebase(D, y)
    assert dict(R.mu_vertex) == dict(D.mu_vertex)
    assert dict(R.mu_edge) == dict(D.mu_edge)


@settings(max_examples=40, deadline=None)
@given(diagrams)
def test_indeg_is_sum_of_outgoing_indices(D):
    rep = regularity(D)
    for x in D.vertex_ids:
        assert rep.indeg[x] == sum((e.index for e in D.half_edges if e.origin == x), Fraction(0))
