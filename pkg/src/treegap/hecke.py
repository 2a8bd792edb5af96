"""Radial functions on (bi)regular trees, convolved by counting paths on tree balls.

A radial function around the base point x0 is a finite combination of the
sphere indicators delta_{2m}.  Convolution is evaluated combinatorially:

    (delta_{2r} * delta_{2s})(y) = #{z : d(x0, z) = 2r, d(z, y) = 2s}

on a ball of radius 2r + 2s, which is large enough that no count touches
the boundary.  The sphere recurrences are then checked against these counts
rather than used to compute them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .generators import tree_ball_adjacency

MAX_RADIUS = 12
MAX_BALL = 2_000_000


class BudgetExceeded(ValueError):
    pass


def _degrees(k0: int, k1: int, parity: int) -> tuple[int, int]:
    """(degree of the base point, degree of its neighbours)."""
    return (k0, k1) if parity == 0 else (k1, k0)


def sphere_size(k0: int, k1: int, n: int) -> int:
    """Number of vertices at distance n from a vertex of degree k0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return 1
    size = k0
    for j in range(1, n):
        size *= (k1 if j % 2 == 1 else k0) - 1
    return size


def ball_size(k0: int, k1: int, R: int) -> int:
    return sum(sphere_size(k0, k1, n) for n in range(R + 1))


@dataclass(frozen=True)
class RadialFunction:
    k0: int
    k1: int
    coefficients: Mapping[int, Fraction] = field(default_factory=dict)
    parity: int = 0

    def __post_init__(self):
        clean = {}
        for r, c in self.coefficients.items():
            if r < 0 or r % 2:
                raise ValueError(f"radius {r} is not a non-negative even number")
            c = Fraction(c)
            if c:
                clean[int(r)] = c
        object.__setattr__(self, "coefficients", dict(sorted(clean.items())))

    @classmethod
    def sphere(cls, k0: int, k1: int, radius: int, parity: int = 0) -> "RadialFunction":
        return cls(k0, k1, {radius: Fraction(1)}, parity)

    def _check(self, other: "RadialFunction") -> None:
        if (self.k0, self.k1, self.parity) != (other.k0, other.k1, other.parity):
            raise ValueError("radial functions live on different trees or base classes")

    def __add__(self, other: "RadialFunction") -> "RadialFunction":
        self._check(other)
        out = dict(self.coefficients)
        for r, c in other.coefficients.items():
            out[r] = out.get(r, Fraction(0)) + c
        return RadialFunction(self.k0, self.k1, out, self.parity)

    def __sub__(self, other: "RadialFunction") -> "RadialFunction":
        return self + other.scale(-1)

    def scale(self, factor) -> "RadialFunction":
        factor = Fraction(factor)
        return RadialFunction(
            self.k0, self.k1, {r: c * factor for r, c in self.coefficients.items()}, self.parity
        )

    def __mul__(self, other: "RadialFunction") -> "RadialFunction":
        return radial_convolve(self, other)

    @property
    def support_radius(self) -> int:
        return max(self.coefficients, default=0)


@lru_cache(maxsize=32)
def _ball(kc: int, ko: int, R: int):
    if R > MAX_RADIUS:
        raise BudgetExceeded(f"ball radius {R} exceeds the limit {MAX_RADIUS}")
    if ball_size(kc, ko, R) > MAX_BALL:
        raise BudgetExceeded(f"ball of radius {R} has more than {MAX_BALL} vertices")
    parent, depth, children = tree_ball_adjacency(kc, ko, R)
    first = {}
    for v, d in enumerate(depth):
        first.setdefault(d, v)
    return parent, depth, children, first


def _distances_from(y: int, parent, children) -> list[int]:
    dist = [-1] * len(parent)
    dist[y] = 0
    queue = deque([y])
    while queue:
        x = queue.popleft()
        nbrs = children[x] if parent[x] < 0 else children[x] + [parent[x]]
        for z in nbrs:
            if dist[z] < 0:
                dist[z] = dist[x] + 1
                queue.append(z)
    return dist


@lru_cache(maxsize=None)
def sphere_product(kc: int, ko: int, r: int, s: int) -> dict[int, int]:
    """Coefficients of delta_r * delta_s by path counting (radii are distances)."""
    R = r + s
    parent, depth, children, first = _ball(kc, ko, R)
    out = {}
    for m in range(abs(r - s), R + 1, 2):
        y = first[m]
        dist = _distances_from(y, parent, children)
        count = sum(1 for z in range(len(parent)) if depth[z] == r and dist[z] == s)
        if count:
            out[m] = count
    return out


def radial_convolve(a: RadialFunction, b: RadialFunction) -> RadialFunction:
    a._check(b)
    kc, ko = _degrees(a.k0, a.k1, a.parity)
    out: dict[int, Fraction] = {}
    for r, ca in a.coefficients.items():
        for s, cb in b.coefficients.items():
            for m, count in sphere_product(kc, ko, r, s).items():
                out[m] = out.get(m, Fraction(0)) + ca * cb * count
    return RadialFunction(a.k0, a.k1, out, a.parity)


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    n: int
    holds: bool
    lhs: Mapping[int, Fraction]
    rhs: Mapping[int, Fraction]


@dataclass(frozen=True)
class RecurrenceReport:
    k0: int
    k1: int
    checks: tuple[IdentityCheck, ...]
    max_radius: int

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.checks)


def verify_recurrences(k0: int, k1: int, n_max: int, parity: int = 0) -> RecurrenceReport:
    """Check the sphere recurrences

        delta_4      = delta_2 * delta_2  - kc (ko - 1) delta_0       - (ko - 2) delta_2
        delta_{2n+2} = delta_2 * delta_2n - (kc - 1)(ko - 1) delta_{2n-2} - (ko - 2) delta_2n

    for 2 <= n <= n_max, where kc is the degree of the base point and ko
    that of its neighbours.
    """
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    kc, ko = _degrees(k0, k1, parity)

    def delta(radius):
        return RadialFunction.sphere(k0, k1, radius, parity)

    checks = []
    d2 = delta(2)
    rhs = d2 * d2 - delta(0).scale(kc * (ko - 1)) - d2.scale(ko - 2)
    lhs = delta(4)
    checks.append(IdentityCheck("delta_4", 1, lhs.coefficients == rhs.coefficients, lhs.coefficients, rhs.coefficients))
    for n in range(2, n_max + 1):
        rhs = d2 * delta(2 * n) - delta(2 * n - 2).scale((kc - 1) * (ko - 1)) - delta(2 * n).scale(ko - 2)
        lhs = delta(2 * n + 2)
        checks.append(
            IdentityCheck(f"delta_{2 * n + 2}", n, lhs.coefficients == rhs.coefficients, lhs.coefficients, rhs.coefficients)
        )
    return RecurrenceReport(k0, k1, tuple(checks), 2 * n_max + 2)


def square_radialization(k0: int, k1: int, parity: int = 0) -> RadialFunction:
    """Row of the squared tree averaging operator at the base point, as a radial function.

    Computed on a radius-3 ball from the operator
    (A f)(x) = average of f over the neighbours of x.
    """
    kc, ko = _degrees(k0, k1, parity)
    parent, depth, children, _ = _ball(kc, ko, 3)

    def nbrs(x):
        return children[x] if parent[x] < 0 else children[x] + [parent[x]]

    row: dict[int, Fraction] = {}
    for m in nbrs(0):
        for z in nbrs(m):
            row[z] = row.get(z, Fraction(0)) + Fraction(1, len(nbrs(0)) * len(nbrs(m)))
    by_radius: dict[int, set[Fraction]] = {}
    for z, value in row.items():
        by_radius.setdefault(depth[z], set()).add(value)
    coefficients = {}
    for radius, values in by_radius.items():
        if len(values) != 1:
            raise AssertionError("squared averaging operator is not radial")
        coefficients[radius] = values.pop()
    return RadialFunction(k0, k1, coefficients, parity)


def two_step_function(k0: int, k1: int, identity_weight=None, parity: int = 0) -> RadialFunction:
    """``c delta_0 + (1 - c) f0`` with f0 the normalized sphere of radius 2.

    The default ``c`` is deg(x0) / (k0 k1), which is what squaring the
    averaging operator produces.
    """
    kc, ko = _degrees(k0, k1, parity)
    c = Fraction(kc, k0 * k1) if identity_weight is None else Fraction(identity_weight)
    f0 = RadialFunction.sphere(k0, k1, 2, parity).scale(Fraction(1, sphere_size(kc, ko, 2)))
    return RadialFunction.sphere(k0, k1, 0, parity).scale(c) + f0.scale(1 - c)
