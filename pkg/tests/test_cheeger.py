import random
from fractions import Fraction

import pytest

from helpers import brute_force_cheeger, cycle, path, random_integer_diagram, two_vertex
from treegap.cheeger import (
    CertificateError,
    CheegerError,
    CoreTooSmall,
    DecayViolated,
    EmptyOrFullSet,
    TooLarge,
    boundary_measure,
    cheeger_exact,
    cheeger_sweep,
    expander_verdict,
    gap_certificate,
)
from treegap.families import cusp_family, ray_blocks_family
from treegap.generators import CuspSpec, RaySpec, block_vertices, cusp_family_spec, gen_cusp, gen_ray_blocks
from treegap.spectral import lambda_bottom, rayleigh


def test_two_vertex_cut():
    cut = boundary_measure(two_vertex(), ["u"])
    assert (cut.mu_S, cut.mu_boundary, cut.ratio, cut.feasible) == (1, 1, 1, True)


def test_four_cycle_constant_is_one():
    best = cheeger_exact(cycle(4))
    assert best.ratio == 1
    assert best.sorted_ids(cycle(4)) == ["c0", "c1"]
    assert brute_force_cheeger(cycle(4)) == 1


def test_block_witness_values():
    D = gen_ray_blocks(q=2, N=3)
    assert [boundary_measure(D, block_vertices(n)).ratio for n in (1, 2, 3)] == [1, Fraction(3, 5), Fraction(3, 7)]


def test_rejects_bad_sets():
    D = cycle(4)
    with pytest.raises(EmptyOrFullSet):
        boundary_measure(D, [])
    with pytest.raises(EmptyOrFullSet):
        boundary_measure(D, D.vertex_ids)
    with pytest.raises(CheegerError):
        boundary_measure(D, ["nope"])


def test_exact_refuses_large_diagrams():
    with pytest.raises(TooLarge):
        cheeger_exact(path(23))


@pytest.mark.parametrize("seed", range(12))
def test_exact_matches_brute_force(seed):
    rng = random.Random(seed)
    D = random_integer_diagram(rng, rng.randint(3, 11), rng.randint(0, 4))
    best = cheeger_exact(D)
    assert best.feasible
    assert best.ratio == brute_force_cheeger(D)
    assert boundary_measure(D, best.S).ratio == best.ratio


@pytest.mark.parametrize("seed", range(12))
def test_sweep_never_beats_exact(seed):
    rng = random.Random(1000 + seed)
    D = random_integer_diagram(rng, rng.randint(3, 16), rng.randint(0, 5))
    sweep = cheeger_sweep(D)
    assert sweep.feasible
    assert sweep.ratio >= cheeger_exact(D).ratio


def test_sweep_finds_small_cut_on_long_ladder():
    assert cheeger_sweep(gen_ray_blocks(q=2, N=10)).ratio <= Fraction(1, 4)


def test_spectral_gap_below_rayleigh_of_best_cut():
    D = gen_ray_blocks(q=2, N=2)
    best = cheeger_exact(D)
    f = [1.0 if x in best.S else 0.0 for x in D.vertex_ids]
    assert lambda_bottom(D).lam <= rayleigh(D, f) + 1e-12


def test_exact_is_deterministic_on_ties():
    a = cheeger_exact(cycle(6))
    b = cheeger_exact(cycle(6))
    assert a.S == b.S


def test_certificate_single_vertex_core():
    cusp = gen_cusp(CuspSpec(("o",), (), (RaySpec("o", 6, 2),)))
    cert = gap_certificate(cusp.diagram, cusp.core, 2, 2)
    assert cert.tail_bound == 1
    assert cert.core_bound is None
    assert cert.certified == 1


def test_certificate_family_q2():
    cusp = gen_cusp(cusp_family_spec(2, 5))
    cert = gap_certificate(cusp.diagram, cusp.core, cusp.c, cusp.d)
    assert cert.tail_bound == 1
    assert cert.core_edge_min == 1
    assert cert.certified == cert.core_bound == 1 / cusp.diagram.total_volume
    assert cheeger_exact(cusp.diagram).ratio >= cert.certified


def test_certificate_hypothesis_errors():
    cusp = gen_cusp(cusp_family_spec(2, 4))
    with pytest.raises(DecayViolated):
        gap_certificate(cusp.diagram, cusp.core, 2, 1)
    with pytest.raises(DecayViolated):
        gap_certificate(cusp.diagram, cusp.core, 2, 3)
    with pytest.raises(DecayViolated):
        gap_certificate(cusp.diagram, cusp.core, 3, 2)
    with pytest.raises(CoreTooSmall):
        gap_certificate(cusp.diagram, ["u"], 2, 2)
    with pytest.raises(CertificateError):
        gap_certificate(cusp.diagram, [], 2, 2)


def test_certificate_requires_path_tails():
    D = cycle(6)
    with pytest.raises(CertificateError):
        gap_certificate(D, ["c0", "c1", "c2", "c3"], 1, 2)


def test_ray_blocks_verdict():
    v = expander_verdict(ray_blocks_family(2), [5, 10, 20], Fraction(1, 5))
    assert v.verdict == "no-expansion-witness"
    assert [r.witness.ratio for r in v.rows] == [Fraction(3, 11), Fraction(1, 7), Fraction(3, 41)]
    assert not v.hypothesis_flag


def test_cusp_verdict():
    v = expander_verdict(cusp_family(2), [2, 5, 10], Fraction(1, 8))
    assert v.verdict == "expansion-consistent"
    assert all(r.h_exact >= r.certified for r in v.rows)


def test_verdict_rejects_unsorted_ladder():
    with pytest.raises(ValueError):
        expander_verdict(ray_blocks_family(2), [5, 3], Fraction(1, 5))
