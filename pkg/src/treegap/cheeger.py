"""Isoperimetric ratios, Cheeger constants and gap certificates for diagrams.

For a vertex set S the boundary is the set of half-edges leaving S, and the
ratio is mu(boundary) / mu(S).  Only sets with mu(S) <= mu(D)/2 are
feasible.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .diagram import Diagram, as_fraction, max_index_ratio
from .spectral import lambda_bottom

EXACT_LIMIT = 22


class CheegerError(ValueError):
    pass


class EmptyOrFullSet(CheegerError):
    pass


class TooLarge(CheegerError):
    pass


class CertificateError(CheegerError):
    pass


class CoreTooSmall(CertificateError):
    pass


class DecayViolated(CertificateError):
    pass


@dataclass(frozen=True)
class CutResult:
    S: frozenset[str]
    mu_S: Fraction
    mu_boundary: Fraction
    ratio: Fraction
    feasible: bool

    def sorted_ids(self, diagram: Diagram) -> list[str]:
        return sorted(self.S, key=diagram.position.__getitem__)


def boundary_measure(diagram: Diagram, S: Iterable[str]) -> CutResult:
    S = frozenset(S)
    unknown = S - set(diagram.vertex_ids)
    if unknown:
        raise CheegerError(f"unknown vertices {sorted(unknown)}")
    if not S or len(S) == len(diagram.vertices):
        raise EmptyOrFullSet("S must be a nonempty proper subset")
    mu_S = diagram.mu(S)
    cut = sum(
        (diagram.mu_edge[e.id] for x in S for e in diagram.out_edges[x] if diagram.terminus(e) not in S),
        Fraction(0),
    )
    return CutResult(S, mu_S, cut, cut / mu_S, 2 * mu_S <= diagram.total_volume)


def _lex_key(S: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(S))


def _integer_weights(diagram: Diagram):
    """Vertex masses and pairwise edge measures scaled to integers."""
    values = list(diagram.mu_vertex.values()) + list(diagram.mu_edge.values())
    scale = math.lcm(*(v.denominator for v in values))
    order = diagram.vertex_ids
    pos = diagram.position
    mass = [int(diagram.mu_vertex[x] * scale) for x in order]
    n = len(order)
    W = [[0] * n for _ in range(n)]
    for e in diagram.half_edges:
        a, b = pos[e.origin], pos[diagram.terminus(e)]
        if a != b:
            W[a][b] += int(diagram.mu_edge[e.id] * scale)
    return mass, W, scale


def cheeger_exact(diagram: Diagram) -> CutResult:
    """Minimum feasible ratio over all vertex subsets, by enumeration.

    Ties go to the lexicographically smallest sorted tuple of vertex ids.
    """
    n = len(diagram.vertices)
    if n > EXACT_LIMIT:
        raise TooLarge(f"{n} vertices; exact enumeration is limited to {EXACT_LIMIT}")
    if n < 2:
        raise EmptyOrFullSet("a single vertex has no proper nonempty subsets")
    mass, W, _ = _integer_weights(diagram)
    total = sum(mass)
    bound = max(total, max(sum(row) for row in W)) * 4
    dtype = np.int64 if bound < 2**62 else object

    masses = np.zeros(1, dtype=dtype)
    cuts = np.zeros(1, dtype=dtype)
    for j in range(n):
        idx = np.arange(len(masses), dtype=np.int64)
        inside = np.zeros(len(masses), dtype=dtype)
        for y in range(j):
            if W[j][y]:
                inside = inside + W[j][y] * ((idx >> y) & 1).astype(dtype)
        masses = np.concatenate([masses, masses + mass[j]])
        cuts = np.concatenate([cuts, cuts + sum(W[j]) - 2 * inside])

    full = (1 << n) - 1
    feasible = 2 * masses <= total
    feasible[0] = False
    feasible[full] = False
    candidates = np.nonzero(feasible)[0]
    if len(candidates) == 0:
        raise CheegerError("no feasible subset")
    ratio = cuts[candidates].astype(float) / masses[candidates].astype(float)
    best = ratio.min()
    near = candidates[ratio <= best * (1 + 1e-9) + 1e-300]
    order = diagram.vertex_ids
    winner = None
    for mask in near:
        mask = int(mask)
        r = Fraction(int(cuts[mask]), int(masses[mask]))
        S = [order[b] for b in range(n) if mask >> b & 1]
        key = (r, _lex_key(S))
        if winner is None or key < winner[0]:
            winner = (key, S)
    return boundary_measure(diagram, winner[1])


def cheeger_sweep(diagram: Diagram, vector: Sequence[float] | None = None) -> CutResult:
    """Best feasible cut among the level sets of the bottom eigenfunction.

    Each sweep cut is scored on whichever side has at most half the volume.
    """
    if len(diagram.vertices) < 2:
        raise EmptyOrFullSet("a single vertex cannot be cut")
    if vector is None:
        vector = lambda_bottom(diagram).vector
    order = diagram.vertex_ids
    ranked = sorted(range(len(order)), key=lambda n: (float(vector[n]), n))
    total = diagram.total_volume
    S: set[str] = set()
    mu_S = Fraction(0)
    cut = Fraction(0)
    best = None
    for n in ranked[:-1]:
        x = order[n]
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            if y == x:
                continue
            cut += -diagram.mu_edge[e.id] if y in S else diagram.mu_edge[e.id]
        S.add(x)
        mu_S += diagram.mu_vertex[x]
        if 2 * mu_S <= total:
            side, side_mu = frozenset(S), mu_S
        elif 2 * (total - mu_S) <= total:
            side, side_mu = frozenset(order) - S, total - mu_S
        else:
            continue
        r = cut / side_mu
        if best is None or r < best.ratio:
            best = CutResult(side, side_mu, cut, r, True)
    if best is None:
        raise CheegerError("no feasible sweep cut")
    return best


@dataclass(frozen=True)
class GapCertificate:
    core: frozenset[str]
    c: Fraction
    d: Fraction
    tail_bound: Fraction
    core_edge_min: Fraction | None
    core_bound: Fraction | None
    certified: Fraction


def _tails(diagram: Diagram, core: frozenset[str]) -> list[list[tuple[str, str]]]:
    """Each component outside the core as a ray ``[(vertex, half-edge back), ...]``."""
    rays = []
    seen: set[str] = set()
    for p in diagram.vertex_ids:
        if p not in core:
            continue
        for e in diagram.out_edges[p]:
            y = diagram.terminus(e)
            if y in core or y in seen:
                continue
            ray = []
            prev_edge = diagram.partner(e)
            while True:
                seen.add(y)
                ray.append((y, prev_edge.id))
                onward = [h for h in diagram.out_edges[y] if h.id != prev_edge.id]
                if any(diagram.terminus(h) in core for h in onward):
                    raise CertificateError(f"tail through {y} returns to the core")
                if len(onward) > 1:
                    raise CertificateError(f"tail branches at {y}; rays must be paths")
                if not onward:
                    break
                h = onward[0]
                nxt = diagram.terminus(h)
                if nxt in seen or nxt == y:
                    raise CertificateError(f"tail through {y} is not a ray")
                prev_edge = diagram.partner(h)
                y = nxt
            rays.append(ray)
    outside = set(diagram.vertex_ids) - core
    if seen != outside:
        raise CertificateError("some vertices outside the core are not on a ray")
    return rays


def _core_connected(diagram: Diagram, core: frozenset[str]) -> bool:
    start = next(iter(sorted(core)))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            if y in core and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen == core


def gap_certificate(diagram: Diagram, core: Iterable[str], c, d) -> GapCertificate:
    """Certified lower bound on the Cheeger constant of a cusped diagram.

    A set S of at most half the volume either avoids the core, in which case
    on every ray its first vertex y has a boundary edge of measure at least
    ``c * mu(y)`` while the ray beyond y weighs at most ``mu(y) / (1 - 1/d)``;
    or S meets the core without containing it and cuts a core edge.
    """
    core = frozenset(core)
    c, d = as_fraction(c), as_fraction(d)
    if not core or not core <= set(diagram.vertex_ids):
        raise CertificateError("core must be a nonempty set of diagram vertices")
    if c <= 0:
        raise CertificateError("c must be positive")
    if d <= 1:
        raise DecayViolated(f"decay factor d={d} gives no geometric decay")
    mu_core = diagram.mu(core)
    if 2 * mu_core <= diagram.total_volume:
        raise CoreTooSmall(f"mu(core)={mu_core} is not more than half of {diagram.total_volume}")
    if not _core_connected(diagram, core):
        raise CertificateError("core is not connected")
    for ray in _tails(diagram, core):
        for t, (y, back) in enumerate(ray):
            if diagram.mu_edge[back] < c * diagram.mu_vertex[y]:
                raise DecayViolated(
                    f"edge {back} from {y} has measure {diagram.mu_edge[back]} < {c} * mu({y})"
                )
            if t + 1 < len(ray):
                nxt = ray[t + 1][0]
                if diagram.mu_vertex[nxt] * d > diagram.mu_vertex[y]:
                    raise DecayViolated(f"mu({nxt}) > mu({y}) / {d}")
    tail_bound = c * (1 - 1 / d)
    inner = [
        diagram.mu_edge[e.id]
        for x in core
        for e in diagram.out_edges[x]
        if diagram.terminus(e) in core and diagram.terminus(e) != x
    ]
    C = min(inner) if inner else None
    core_bound = C / diagram.total_volume if C is not None else None
    certified = tail_bound if core_bound is None else min(tail_bound, core_bound)
    return GapCertificate(core, c, d, tail_bound, C, core_bound, certified)


@dataclass(frozen=True)
class Family:
    """A ladder of truncations ``N -> Diagram`` with optional witnesses and certificates."""

    name: str
    q: int
    build: Callable[[int], Diagram]
    witnesses: Callable[[Diagram, int], list[list[str]]] | None = None
    certify: Callable[[Diagram, int], GapCertificate] | None = None


@dataclass(frozen=True)
class VerdictRow:
    N: int
    dim: int
    lam: float
    h_upper: Fraction
    h_method: str
    h_exact: Fraction | None
    witness: CutResult | None
    certified: Fraction | None
    max_index_ratio: Fraction
    max_indeg: Fraction


@dataclass(frozen=True)
class Verdict:
    family: str
    eps: Fraction
    rows: tuple[VerdictRow, ...]
    verdict: str
    hypothesis_flag: bool
    note: str = "evidence about the listed truncations only, not about the infinite diagram"


def evaluate_truncation(family: Family, N: int) -> VerdictRow:
    D = family.build(N)
    spectral = lambda_bottom(D)
    h_exact = None
    if len(D.vertices) <= EXACT_LIMIT:
        best = cheeger_exact(D)
        h_exact = best.ratio
        h_upper, method = best.ratio, "exact"
    else:
        best = cheeger_sweep(D, spectral.vector)
        h_upper, method = best.ratio, "sweep"
    witness = None
    if family.witnesses is not None:
        for S in family.witnesses(D, N):
            cut = boundary_measure(D, S)
            if cut.feasible and (witness is None or cut.ratio < witness.ratio):
                witness = cut
        if witness is not None and witness.ratio < h_upper:
            h_upper, method = witness.ratio, "witness"
    certified = family.certify(D, N).certified if family.certify is not None else None
    return VerdictRow(
        N=N,
        dim=len(D.vertices),
        lam=spectral.lam,
        h_upper=h_upper,
        h_method=method,
        h_exact=h_exact,
        witness=witness,
        certified=certified,
        max_index_ratio=max_index_ratio(D),
        max_indeg=max(D.indeg(x) for x in D.vertex_ids),
    )


def expander_verdict(family: Family, N_list: Sequence[int], eps) -> Verdict:
    """Classify a truncation ladder as a non-expansion witness or as consistent with expansion."""
    eps = as_fraction(eps)
    N_list = list(N_list)
    if not N_list or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("truncation sizes must be strictly increasing")
    rows = tuple(evaluate_truncation(family, N) for N in N_list)
    hs = [r.h_upper for r in rows]
    decreasing = all(b < a for a, b in zip(hs, hs[1:]))
    lower = [
        r.h_exact if r.h_exact is not None else r.certified if r.certified is not None else r.h_upper
        for r in rows
    ]
    if decreasing and hs[-1] < eps:
        verdict = "no-expansion-witness"
    elif min(lower) >= eps:
        verdict = "expansion-consistent"
    else:
        verdict = "inconclusive"
    ratios = [r.max_index_ratio for r in rows]
    degs = [r.max_indeg for r in rows]
    growing = len(rows) > 2 and (
        all(b > a for a, b in zip(ratios, ratios[1:])) or all(b > a for a, b in zip(degs, degs[1:]))
    )
    return Verdict(family.name, eps, rows, verdict, growing)
