"""Command-line front end.

Exit status: 0 on success, 2 when an input fails validation, 3 when a
checked identity does not hold.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from . import cheeger, cover, diagio, generators, hecke, spectral
from .diagram import DiagramError, as_fraction, regularity
from .families import FAMILIES
from .report import ReportRow, emit_report, fmt_decimal, fmt_rational

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_IDENTITY = 3


class IdentityFailure(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma separated integer list: {text!r}") from None
    if not values or any(b <= a for a, b in zip(values, values[1:])):
        raise argparse.ArgumentTypeError("truncation list must be non-empty and strictly increasing")
    return values


def _rational(text: str) -> Fraction:
    try:
        return as_fraction(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_generate(args) -> int:
    if args.family == "ray-blocks":
        D = generators.gen_ray_blocks(q=args.q, N=args.blocks)
    elif args.family == "cusp":
        D = generators.gen_cusp(generators.cusp_family_spec(args.q, args.length or args.blocks)).diagram
    else:
        D = generators.gen_tree_ball(args.k0, args.k1, args.radius)
    _write(diagio.dump_diagram(D), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    D = diagio.load_diagram(args.file)
    reg = regularity(D)
    print(f"vertices {len(D.vertices)}")
    print(f"edges {len(D.half_edges) // 2}")
    print(f"total_volume {fmt_rational(D.total_volume)}")
    if reg.is_k_regular:
        print(f"k_regular {reg.k}")
    else:
        print("k_regular no")
    if reg.exempted:
        print(f"boundary {' '.join(sorted(reg.exempted, key=D.position.__getitem__))}")
    return EXIT_OK


def cmd_lambda(args) -> int:
    D = diagio.load_diagram(args.file)
    rep = spectral.lambda_bottom(D, tol=args.tol, method=args.method)
    print(f"lambda {fmt_decimal(rep.lam)}")
    print(f"method {rep.method}")
    print(f"dim {rep.dim}")
    print(f"residual {rep.residual:.3e}")
    print(f"deflation {rep.deflation:.3e}")
    if not rep.constant_indeg:
        print("note non-constant in-degree; self-adjoint for the weight indeg*mu")
    return EXIT_OK


def _print_cut(D, cut) -> None:
    print(f"S {' '.join(cut.sorted_ids(D))}")
    print(f"mu_S {fmt_rational(cut.mu_S)}")
    print(f"mu_boundary {fmt_rational(cut.mu_boundary)}")
    print(f"ratio {fmt_rational(cut.ratio)}")
    print(f"feasible {'yes' if cut.feasible else 'no'}")


def cmd_cheeger(args) -> int:
    D = diagio.load_diagram(args.file)
    if args.set:
        cut = cheeger.boundary_measure(D, args.set.split(","))
    elif args.exact:
        cut = cheeger.cheeger_exact(D)
    else:
        cut = cheeger.cheeger_sweep(D)
    _print_cut(D, cut)
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.file:
        D = diagio.load_diagram(args.file)
        if not (args.core and args.c is not None and args.d is not None):
            raise SystemExit("certify-gap FILE needs --core, --c and --d")
        core, c, d = args.core.split(","), args.c, args.d
    else:
        cusp = generators.gen_cusp(generators.cusp_family_spec(args.q, args.length))
        D, core = cusp.diagram, cusp.core
        c = args.c if args.c is not None else cusp.c
        d = args.d if args.d is not None else cusp.d
    cert = cheeger.gap_certificate(D, core, c, d)
    print(f"core {' '.join(sorted(cert.core, key=D.position.__getitem__))}")
    print(f"c {cert.c}")
    print(f"d {cert.d}")
    print(f"tail_bound {fmt_rational(cert.tail_bound)}")
    print(f"core_bound {fmt_rational(cert.core_bound)}")
    print(f"certified {fmt_rational(cert.certified)}")
    if args.check and len(D.vertices) <= cheeger.EXACT_LIMIT:
        h = cheeger.cheeger_exact(D).ratio
        print(f"h_exact {fmt_rational(h)}")
        if h < cert.certified:
            raise IdentityFailure(f"exact Cheeger constant {h} is below the certificate {cert.certified}")
    return EXIT_OK


def _verdict_rows(verdict, q) -> list[ReportRow]:
    return [ReportRow.from_verdict_row(verdict.family, q, r) for r in verdict.rows]


def cmd_verdict(args) -> int:
    family = FAMILIES[args.family](args.q)
    verdict = cheeger.expander_verdict(family, args.N, args.eps)
    print(f"verdict {verdict.verdict}")
    print(f"note {verdict.note}")
    if verdict.hypothesis_flag:
        print("warning index ratio or in-degree grows along the ladder")
    for r in verdict.rows:
        parts = [f"N={r.N}", f"dim={r.dim}", f"h_upper={r.h_upper}", f"via={r.h_method}", f"lambda={fmt_decimal(r.lam)}"]
        if r.witness is not None:
            parts.append(f"witness_ratio={r.witness.ratio}")
        if r.certified is not None:
            parts.append(f"certified={r.certified}")
        print(" ".join(parts))
    if args.out:
        emit_report(_verdict_rows(verdict, args.q), "csv", args.out)
    return EXIT_OK


def cmd_hecke(args) -> int:
    rep = hecke.verify_recurrences(args.k0, args.k1, args.nmax)
    lines = []
    for c in rep.checks:
        lines.append([c.name, c.n, "ok" if c.holds else "FAIL"])
    buf = [["identity", "n", "status"], *lines]
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            csv.writer(fh, lineterminator="\n").writerows(buf)
    else:
        csv.writer(sys.stdout, lineterminator="\n").writerows(buf)
    if not rep.holds:
        raise IdentityFailure("a sphere recurrence failed")
    return EXIT_OK


def cmd_cover(args) -> int:
    if args.graph_only:
        graph = diagio.parse_graph(Path(args.file).read_text(encoding="utf-8"), args.file)
    else:
        graph = diagio.load_diagram(args.file)
    base = args.base or getattr(graph, "base", None) or graph.vertex_ids[0]
    ball = cover.universal_cover_ball(graph, base, args.radius)
    if args.out:
        diagio.save_diagram(ball.diagram, args.out)
    degrees = cover.interior_degrees(ball)
    print(f"vertices {len(ball.diagram.vertices)}")
    print("interior_degrees " + " ".join(f"{k}:{v}" for k, v in sorted(degrees.items())))
    bad = cover.fiber_counts(ball, graph)
    if bad:
        raise IdentityFailure(f"{len(bad)} fibre counts differ from the indices")
    if args.grouping:
        if args.graph_only:
            raise SystemExit("--grouping needs a diagram with a measure")
        G = cover.finite_grouping(graph)
        with open(args.grouping, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["vertex", "order"])
            for x in graph.vertex_ids:
                w.writerow([x, G.vertex_orders[x]])
        print(f"grouping_scale {G.scale}")
        print(f"covolume {fmt_rational(cover.covolume(G))}")
    return EXIT_OK


def build_report(q: int, ray_N: list[int], cusp_N: list[int]) -> tuple[list[ReportRow], list[str]]:
    """Rows for both ladders plus a list of failed identity checks."""
    failures = []
    ray = cheeger.expander_verdict(FAMILIES["ray-blocks"](q), ray_N, Fraction(1, 10))
    for r in ray.rows:
        expect = Fraction(q + 1, 2 * r.N + 1)
        if r.witness is None or r.witness.ratio != expect:
            failures.append(f"ray-blocks N={r.N}: block ratio is not {expect}")
        if r.h_upper > expect:
            failures.append(f"ray-blocks N={r.N}: h_upper above {expect}")
    lams = [r.lam for r in ray.rows]
    if any(b >= a for a, b in zip(lams, lams[1:])):
        failures.append("ray-blocks: lambda does not decrease along the ladder")

    cusp_family = FAMILIES["cusp"](q)
    certs = [cusp_family.certify(cusp_family.build(N), N).certified for N in cusp_N]
    cusp = cheeger.expander_verdict(cusp_family, cusp_N, min(certs))
    for r in cusp.rows:
        if r.certified is None or r.certified <= 0:
            failures.append(f"cusp N={r.N}: no positive certificate")
        elif r.h_exact is not None and r.h_exact < r.certified:
            failures.append(f"cusp N={r.N}: exact h below the certificate")
    if cusp.verdict != "expansion-consistent":
        failures.append(f"cusp: verdict {cusp.verdict}")
    rows = _verdict_rows(ray, q) + _verdict_rows(cusp, q)
    return rows, failures


def cmd_report(args) -> int:
    rows, failures = build_report(args.q, args.ray_N, args.cusp_N)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    emit_report(rows, "csv", out / "report.csv")
    emit_report(rows, "svg", out / "report.svg")
    print(f"wrote {out / 'report.csv'} and {out / 'report.svg'}")
    if failures:
        raise IdentityFailure("; ".join(failures))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="treegap", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a generated diagram in diag v1 format")
    g.add_argument("--family", choices=["ray-blocks", "cusp", "ball"], required=True)
    g.add_argument("--q", type=int, default=2)
    g.add_argument("--blocks", type=int, default=3)
    g.add_argument("--length", type=int, default=None, help="ray length for --family cusp")
    g.add_argument("--k0", type=int, default=3)
    g.add_argument("--k1", type=int, default=3)
    g.add_argument("--radius", type=int, default=2)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="parse and validate a diagram file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    lam = sub.add_parser("lambda", help="bottom of the Laplace spectrum off the constants")
    lam.add_argument("file")
    lam.add_argument("--tol", type=_positive_float, default=1e-9)
    lam.add_argument("--method", choices=["auto", "dense", "iterative"], default="auto")
    lam.set_defaults(func=cmd_lambda)

    ch = sub.add_parser("cheeger", help="isoperimetric ratio of a set or the Cheeger constant")
    ch.add_argument("file")
    mode = ch.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--sweep", action="store_true")
    mode.add_argument("--set", help="comma separated vertex ids")
    ch.set_defaults(func=cmd_cheeger)

    cg = sub.add_parser("certify-gap", help="lower bound on the Cheeger constant of a cusped diagram")
    cg.add_argument("file", nargs="?")
    cg.add_argument("--core")
    cg.add_argument("--c", type=_rational)
    cg.add_argument("--d", type=_rational)
    cg.add_argument("--q", type=int, default=2)
    cg.add_argument("--length", type=int, default=5)
    cg.add_argument("--check", action="store_true", help="compare with the exact Cheeger constant")
    cg.set_defaults(func=cmd_certify)

    vd = sub.add_parser("verdict", help="expansion verdict over a truncation ladder")
    vd.add_argument("--family", choices=sorted(FAMILIES), required=True)
    vd.add_argument("--q", type=int, default=2)
    vd.add_argument("--N", type=_int_list, required=True)
    vd.add_argument("--eps", type=_rational, required=True)
    vd.add_argument("--out")
    vd.set_defaults(func=cmd_verdict)

    hk = sub.add_parser("hecke-verify", help="check the sphere recurrences by path counting")
    hk.add_argument("--k0", type=int, required=True)
    hk.add_argument("--k1", type=int, required=True)
    hk.add_argument("--nmax", type=int, default=3)
    hk.add_argument("--out")
    hk.set_defaults(func=cmd_hecke)

    cv = sub.add_parser("cover", help="unfold a ball of the universal cover")
    cv.add_argument("file")
    cv.add_argument("--base")
    cv.add_argument("--radius", type=int, default=3)
    cv.add_argument("--out")
    cv.add_argument("--grouping", help="write vertex group orders as CSV")
    cv.add_argument("--graph-only", action="store_true", help="do not require a measure")
    cv.set_defaults(func=cmd_cover)

    rp = sub.add_parser("report", help="reproduce both ladders as CSV and SVG")
    rp.add_argument("--q", type=int, default=2)
    rp.add_argument("--ray-N", type=_int_list, default=[2, 5, 10, 20])
    rp.add_argument("--cusp-N", type=_int_list, default=[2, 5, 10, 20])
    rp.add_argument("--out-dir", default="report")
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DiagramError, cheeger.CheegerError, hecke.BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except IdentityFailure as exc:
        print(f"identity failed: {exc}", file=sys.stderr)
        return EXIT_IDENTITY


if __name__ == "__main__":
    sys.exit(main())
