"""Adjacency and Laplace operators of a diagram and the bottom of the spectrum.

The averaging operator is

    (A f)(x) = 1/indeg(x) * sum_{e out of x} mu(e)/mu(x) * f(terminus e)

and the Laplacian is ``I - A``.  ``A`` is self-adjoint for the weight
``w(x) = indeg(x) * mu(x)``; the symmetric matrix used by the eigensolvers
is ``W^{1/2} A W^{-1/2}``, whose (x, y) entry is the total edge measure
between x and y divided by ``sqrt(w(x) w(y))``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackNoConvergence, LinearOperator, eigsh

from .diagram import Diagram, DiagramError

DENSE_LIMIT = 512
# the constant direction is pushed to this eigenvalue of I - S, above the spectrum [0, 2]
_DEFLATION_SHIFT = 3.0


class ZeroIndeg(DiagramError):
    pass


class NotBipartite(DiagramError):
    pass


class NotRegular(DiagramError):
    pass


class DegenerateFunction(ValueError):
    pass


class ConvergenceFailure(RuntimeError):
    def __init__(self, message: str, report: "SpectralReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True, eq=False)
class OperatorBundle:
    order: tuple[str, ...]
    adjacency: Mapping[str, Mapping[str, Fraction]]  # exact A_D rows
    weights: tuple[Fraction, ...]  # w(x) = indeg(x) mu(x)
    sym: sp.csr_matrix
    sqrt_w: np.ndarray
    parity: tuple[int, ...] | None
    constant_indeg: bool

    @property
    def dim(self) -> int:
        return len(self.order)

    def dense_adjacency(self) -> np.ndarray:
        pos = {x: n for n, x in enumerate(self.order)}
        A = np.zeros((self.dim, self.dim))
        for x, row in self.adjacency.items():
            for y, a in row.items():
                A[pos[x], pos[y]] = float(a)
        return A

    def unit_constant(self) -> np.ndarray:
        """The constant function in the symmetric coordinates, normalized."""
        return self.sqrt_w / np.linalg.norm(self.sqrt_w)


@dataclass(frozen=True, eq=False)
class SpectralReport:
    lam: float
    method: str
    residual: float
    dim: int
    deflation: float
    vector: np.ndarray = field(repr=False)  # eigenfunction in the natural basis
    converged: bool = True
    constant_indeg: bool = True


def _parity(diagram: Diagram) -> tuple[int, ...] | None:
    colour = {diagram.base: 0}
    queue = deque([diagram.base])
    while queue:
        x = queue.popleft()
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            if y not in colour:
                colour[y] = 1 - colour[x]
                queue.append(y)
            elif colour[y] == colour[x]:
                return None
    return tuple(colour[x] for x in diagram.vertex_ids)


def exact_adjacency(diagram: Diagram) -> dict[str, dict[str, Fraction]]:
    rows: dict[str, dict[str, Fraction]] = {}
    for x in diagram.vertex_ids:
        deg = diagram.indeg(x)
        if deg == 0:
            raise ZeroIndeg(f"vertex {x} has no outgoing half-edges")
        row: dict[str, Fraction] = {}
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            row[y] = row.get(y, Fraction(0)) + diagram.mu_edge[e.id] / diagram.mu_vertex[x] / deg
        rows[x] = row
    return rows


def assemble_operators(diagram: Diagram) -> OperatorBundle:
    order = diagram.vertex_ids
    pos = diagram.position
    adjacency = exact_adjacency(diagram)
    indeg = [diagram.indeg(x) for x in order]
    weights = tuple(k * diagram.mu_vertex[x] for k, x in zip(indeg, order))

    # total edge measure per unordered vertex pair
    between: dict[tuple[int, int], Fraction] = {}
    for e in diagram.half_edges:
        a, b = pos[e.origin], pos[diagram.terminus(e)]
        if a <= b:
            between[(a, b)] = between.get((a, b), Fraction(0)) + diagram.mu_edge[e.id]
    rows, cols, vals = [], [], []
    for (a, b), m in between.items():
        if a == b:
            # loops: both half-edges start at a and were both counted
            value = math.sqrt(m * m / (weights[a] * weights[a]))
            rows.append(a)
            cols.append(a)
            vals.append(value)
            continue
        value = math.sqrt(m * m / (weights[a] * weights[b]))
        rows += [a, b]
        cols += [b, a]
        vals += [value, value]
    n = len(order)
    sym = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    sqrt_w = np.array([math.sqrt(w) for w in weights])
    return OperatorBundle(
        order=order,
        adjacency=adjacency,
        weights=weights,
        sym=sym,
        sqrt_w=sqrt_w,
        parity=_parity(diagram),
        constant_indeg=len(set(indeg)) == 1,
    )


def _as_bundle(obj) -> OperatorBundle:
    return obj if isinstance(obj, OperatorBundle) else assemble_operators(obj)


def dense_spectrum(diagram_or_bundle) -> np.ndarray:
    """Eigenvalues of the non-symmetric A_D, sorted (real parts)."""
    A = _as_bundle(diagram_or_bundle).dense_adjacency()
    return np.sort(np.linalg.eigvals(A).real)


def symmetric_spectrum(diagram_or_bundle) -> np.ndarray:
    return np.linalg.eigvalsh(_as_bundle(diagram_or_bundle).sym.toarray())


def _finish(bundle: OperatorBundle, lam: float, v: np.ndarray, method: str, tol: float) -> SpectralReport:
    u = bundle.unit_constant()
    v = v / np.linalg.norm(v)
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    Lv = v - bundle.sym @ v
    residual = float(np.linalg.norm(Lv - lam * v))
    deflation = float(abs(u @ v))
    return SpectralReport(
        lam=float(lam),
        method=method,
        residual=residual,
        dim=bundle.dim,
        deflation=deflation,
        vector=v / bundle.sqrt_w,
        converged=residual <= tol and deflation <= tol,
        constant_indeg=bundle.constant_indeg,
    )


def lambda_bottom(diagram_or_bundle, tol: float = 1e-9, method: str = "auto") -> SpectralReport:
    """Smallest eigenvalue of the Laplacian off the constants.

    ``method`` is ``"dense"``, ``"iterative"`` or ``"auto"`` (dense up to
    :data:`DENSE_LIMIT` vertices).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    bundle = _as_bundle(diagram_or_bundle)
    n = bundle.dim
    if n < 2:
        raise ValueError("a single vertex has no non-constant functions")
    if method == "auto":
        method = "dense" if n <= DENSE_LIMIT else "iterative"
    u = bundle.unit_constant()

    if method == "dense":
        L = np.eye(n) - bundle.sym.toarray() + _DEFLATION_SHIFT * np.outer(u, u)
        vals, vecs = np.linalg.eigh(L)
        report = _finish(bundle, vals[0], vecs[:, 0], "dense-oracle", tol)
    elif method == "iterative":
        S = bundle.sym

        def matvec(x):
            x = np.ravel(x)
            return S @ x - _DEFLATION_SHIFT * u * (u @ x)

        op = LinearOperator((n, n), matvec=matvec, dtype=float)
        v0 = np.random.default_rng(0).standard_normal(n)
        ncv = min(n, 40)
        try:
            vals, vecs = eigsh(op, k=1, which="LA", tol=tol * 1e-3, ncv=ncv, v0=v0, maxiter=50 * n)
            theta, v = vals[0], vecs[:, 0]
        except ArpackNoConvergence as exc:
            if len(exc.eigenvalues) == 0:
                best = _finish(bundle, float("nan"), v0, "iterative", tol)
                raise ConvergenceFailure("eigsh returned no eigenvalue", best) from None
            theta, v = exc.eigenvalues[0], exc.eigenvectors[:, 0]
        report = _finish(bundle, 1.0 - theta, v, "iterative", tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not report.converged:
        raise ConvergenceFailure(
            f"residual {report.residual:.3g} / deflation {report.deflation:.3g} above tol {tol}", report
        )
    return report


def rayleigh(diagram_or_bundle, f) -> float:
    """Laplacian quadratic form of ``f`` minus its weighted mean, normalized."""
    bundle = _as_bundle(diagram_or_bundle)
    if isinstance(f, Mapping):
        f = [f[x] for x in bundle.order]
    f = np.asarray(f, dtype=float)
    w = bundle.sqrt_w ** 2
    f0 = f - (w @ f) / w.sum()
    g = bundle.sqrt_w * f0
    norm2 = float(g @ g)
    scale = float(np.sqrt(w @ (f * f))) or 1.0
    if norm2 <= (1e-12 * scale) ** 2:
        raise DegenerateFunction("function is constant")
    return float((norm2 - g @ (bundle.sym @ g)) / norm2)


@dataclass(frozen=True)
class SquareSplitReport:
    k0: Fraction
    k1: Fraction
    identity_weight: Mapping[int, Fraction]  # per parity class
    swaps_parity: bool
    max_dev_square: float  # identity for A_D^2 on interior rows
    max_dev_spectrum: float  # affine relation between eigenvalues
    interior: Mapping[int, int]  # interior size per parity class
    tol: float

    @property
    def holds(self) -> bool:
        return self.swaps_parity and self.max_dev_square <= self.tol and self.max_dev_spectrum <= self.tol


def _class_degrees(diagram: Diagram, parity: Sequence[int]) -> tuple[Fraction, Fraction]:
    degs: dict[int, set[Fraction]] = {0: set(), 1: set()}
    for x, c in zip(diagram.vertex_ids, parity):
        if x not in diagram.boundary:
            degs[c].add(diagram.indeg(x))
    if len(degs[0]) != 1 or len(degs[1]) > 1:
        raise NotRegular(f"in-degrees per parity class are {degs}")
    k0 = next(iter(degs[0]))
    k1 = next(iter(degs[1])) if degs[1] else k0
    return k0, k1


def two_step_operators(diagram: Diagram, rows: Sequence[str], k_row: Fraction, k_other: Fraction):
    """Exact rows of A_D^2 and of the normalized distance-2 operator.

    The distance-2 operator is the projection of the tree's sphere-of-radius-2
    average: from a lift of x, the neighbours over e number i(e); each of them
    sees i(e') further neighbours over e', one fewer when e' reverses e.
    """
    A = {}
    for x in set(rows) | {diagram.terminus(e) for x0 in rows for e in diagram.out_edges[x0]}:
        row: dict[str, Fraction] = {}
        deg = diagram.indeg(x)
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            row[y] = row.get(y, Fraction(0)) + diagram.mu_edge[e.id] / diagram.mu_vertex[x] / deg
        A[x] = row
    sphere = k_row * (k_other - 1)
    square, dist2 = {}, {}
    for x in rows:
        srow: dict[str, Fraction] = {}
        for y, a in A[x].items():
            for z, b in A[y].items():
                srow[z] = srow.get(z, Fraction(0)) + a * b
        square[x] = srow
        wrow: dict[str, Fraction] = {}
        for e in diagram.out_edges[x]:
            y = diagram.terminus(e)
            for e2 in diagram.out_edges[y]:
                count = e2.index - (1 if e2.id == e.partner else 0)
                if count:
                    z = diagram.terminus(e2)
                    wrow[z] = wrow.get(z, Fraction(0)) + e.index * count / sphere
        dist2[x] = wrow
    return square, dist2


def _interior(diagram: Diagram, members: Sequence[str]) -> list[str]:
    bad = diagram.boundary
    out = []
    for x in members:
        if x in bad:
            continue
        if any(diagram.terminus(e) in bad for e in diagram.out_edges[x]):
            continue
        out.append(x)
    return out


def _principal_eigs(rows: Mapping[str, Mapping[str, Fraction]], keep: Sequence[str], mu: Mapping[str, Fraction]) -> np.ndarray:
    idx = {x: n for n, x in enumerate(keep)}
    M = np.zeros((len(keep), len(keep)))
    for x in keep:
        for z, a in rows[x].items():
            if z in idx:
                M[idx[x], idx[z]] = float(a)
    s = np.array([math.sqrt(mu[x]) for x in keep])
    M = (s[:, None] * M) / s[None, :]
    return np.linalg.eigvalsh((M + M.T) / 2)


def parity_classes(diagram: Diagram) -> dict[int, list[str]]:
    parity = _parity(diagram)
    if parity is None:
        raise NotBipartite("diagram has an odd cycle")
    classes: dict[int, list[str]] = {0: [], 1: []}
    for x, c in zip(diagram.vertex_ids, parity):
        classes[c].append(x)
    return classes


def square_split_spectra(diagram: Diagram, parity_class: int = 0, identity_weight=None):
    """Interior eigenvalues of A_D^2 and of the distance-2 operator on one class.

    Returns ``(square_eigs, dist2_eigs, identity_weight)``.
    """
    classes = parity_classes(diagram)
    side = {x: c for c, xs in classes.items() for x in xs}
    k0, k1 = _class_degrees(diagram, [side[x] for x in diagram.vertex_ids])
    k_row, k_other = (k0, k1) if parity_class == 0 else (k1, k0)
    if identity_weight is None:
        identity_weight = k_row / (k0 * k1)
    keep = _interior(diagram, classes[parity_class])
    square, dist2 = two_step_operators(diagram, keep, k_row, k_other)
    return (
        _principal_eigs(square, keep, diagram.mu_vertex),
        _principal_eigs(dist2, keep, diagram.mu_vertex),
        Fraction(identity_weight),
    )


def square_split_check(diagram: Diagram, tol: float = 1e-9, identity_weight=None) -> SquareSplitReport:
    """Check that A_D swaps parity classes and that on each class

        A_D^2 = c I + (1 - c) W,

    where W is the normalized distance-2 operator and ``c`` is
    ``deg(x) / (k0 k1)`` unless ``identity_weight`` overrides it.  Both the
    operator identity (exact, interior rows) and the induced affine relation
    between spectra are checked.
    """
    classes = parity_classes(diagram)
    side = {x: c for c, xs in classes.items() for x in xs}
    k0, k1 = _class_degrees(diagram, [side[x] for x in diagram.vertex_ids])
    adjacency = exact_adjacency(diagram)
    swaps = all(side[y] != side[x] for x, row in adjacency.items() for y in row)

    dev_square = Fraction(0)
    dev_spec = 0.0
    weights: dict[int, Fraction] = {}
    interior: dict[int, int] = {}
    for c in (0, 1):
        k_row, k_other = (k0, k1) if c == 0 else (k1, k0)
        cw = Fraction(identity_weight) if identity_weight is not None else k_row / (k0 * k1)
        weights[c] = cw
        keep = _interior(diagram, classes[c])
        interior[c] = len(keep)
        if not keep or k_other < 2:
            continue
        square, dist2 = two_step_operators(diagram, keep, k_row, k_other)
        for x in keep:
            cols = set(square[x]) | set(dist2[x]) | {x}
            for z in cols:
                expect = (cw if z == x else 0) + (1 - cw) * dist2[x].get(z, Fraction(0))
                dev_square = max(dev_square, abs(square[x].get(z, Fraction(0)) - expect))
        sq = _principal_eigs(square, keep, diagram.mu_vertex)
        w = _principal_eigs(dist2, keep, diagram.mu_vertex)
        mapped = np.sort(float(cw) + (1 - float(cw)) * w)
        dev_spec = max(dev_spec, float(np.max(np.abs(np.sort(sq) - mapped))))
    return SquareSplitReport(
        k0=k0,
        k1=k1,
        identity_weight=weights,
        swaps_parity=swaps,
        max_dev_square=float(dev_square),
        max_dev_spectrum=dev_spec,
        interior=interior,
        tol=tol,
    )


def parity_block_spectra(diagram: Diagram) -> dict[int, np.ndarray]:
    """Eigenvalues of the full A_D^2 restricted to each parity class."""
    classes = parity_classes(diagram)
    adjacency = exact_adjacency(diagram)
    out = {}
    for c, keep in classes.items():
        square = {}
        for x in keep:
            srow: dict[str, Fraction] = {}
            for y, a in adjacency[x].items():
                for z, b in adjacency[y].items():
                    srow[z] = srow.get(z, Fraction(0)) + a * b
            square[x] = srow
        weights = {x: diagram.indeg(x) * diagram.mu_vertex[x] for x in keep}
        out[c] = _principal_eigs(square, keep, weights) if keep else np.array([])
    return out
