"""CSV and SVG output for truncation ladders."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .cheeger import VerdictRow

HEADER = ["family", "q", "N", "dim", "h_upper", "h_exact", "lambda", "certified_lower"]


@dataclass(frozen=True)
class ReportRow:
    family: str
    q: int
    N: int
    dim: int
    h_upper: Fraction
    h_exact: Fraction | None
    lam: float
    certified: Fraction | None

    @classmethod
    def from_verdict_row(cls, family: str, q: int, row: VerdictRow) -> "ReportRow":
        return cls(family, q, row.N, row.dim, row.h_upper, row.h_exact, row.lam, row.certified)


def fmt_decimal(x: float) -> str:
    return f"{x:.12g}"


def fmt_rational(x: Fraction | None) -> str:
    """``p/q`` followed by a 12-significant-digit decimal; empty for None."""
    if x is None:
        return ""
    return f"{x} {fmt_decimal(float(x))}"


def render_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(HEADER)
    for r in rows:
        writer.writerow(
            [
                r.family,
                r.q,
                r.N,
                r.dim,
                fmt_rational(r.h_upper),
                fmt_rational(r.h_exact),
                fmt_decimal(r.lam),
                fmt_rational(r.certified),
            ]
        )
    return buf.getvalue()


_COLOURS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]


def render_svg(rows: Sequence[ReportRow], width: int = 640, height: int = 400) -> str:
    """Line plot of lambda and h_upper against N, log10 vertical axis."""
    margin = 60
    series: dict[str, list[tuple[int, float]]] = {}
    for r in rows:
        series.setdefault(f"{r.family} q={r.q} lambda", []).append((r.N, r.lam))
        series.setdefault(f"{r.family} q={r.q} h", []).append((r.N, float(r.h_upper)))
    points = [p for pts in series.values() for p in pts if p[1] > 0]
    n_lo = min(p[0] for p in points)
    n_hi = max(p[0] for p in points)
    y_lo = math.floor(math.log10(min(p[1] for p in points)))
    y_hi = math.ceil(math.log10(max(p[1] for p in points)))
    if n_hi == n_lo:
        n_hi += 1
    if y_hi == y_lo:
        y_hi += 1

    def sx(n):
        return margin + (n - n_lo) / (n_hi - n_lo) * (width - 2 * margin)

    def sy(v):
        return height - margin - (math.log10(v) - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="{height - 15}" text-anchor="middle" font-size="12">N</text>',
    ]
    for e in range(y_lo, y_hi + 1):
        y = sy(10.0**e)
        out.append(f'<text x="{margin - 8}" y="{y + 4:.1f}" text-anchor="end" font-size="10">1e{e}</text>')
    for n in sorted({p[0] for p in points}):
        out.append(
            f'<text x="{sx(n):.1f}" y="{height - margin + 14}" text-anchor="middle" font-size="10">{n}</text>'
        )
    for k, (name, pts) in enumerate(series.items()):
        colour = _COLOURS[k % len(_COLOURS)]
        dash = ' stroke-dasharray="4 3"' if name.endswith(" h") else ""
        coords = " ".join(f"{sx(n):.2f},{sy(v):.2f}" for n, v in pts if v > 0)
        out.append(f'<polyline fill="none" stroke="{colour}"{dash} points="{coords}"/>')
        out.append(
            f'<text x="{width - margin - 4}" y="{margin + 14 * k}" text-anchor="end" font-size="10" fill="{colour}">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_report(rows: Sequence[ReportRow], fmt: str, path: str | Path) -> Path:
    if not rows:
        raise ValueError("nothing to report")
    if fmt == "csv":
        text = render_csv(rows)
    elif fmt == "svg":
        text = render_svg(rows)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    path = Path(path)
    path.write_text(text, encoding="utf-8")
    return path
