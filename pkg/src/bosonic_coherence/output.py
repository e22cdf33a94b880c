"""Deterministic CSV and SVG writers for sweep results."""

from html import escape
import math


def fmt(x):
    """12 significant digits, locale independent, no negative zero."""
    if isinstance(x, str):
        return x
    x = float(x)
    if x == 0:
        return "0"
    return format(x, ".12g")


def render_csv(metadata, header, rows):
    """Return CSV text: ``#`` metadata lines, a header row, then data rows."""
    lines = [f"# {key}: {value}" for key, value in metadata]
    lines.append(",".join(header))
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_csv_rows(text):
    """Parse text produced by :func:`render_csv` into ``(header, rows)``."""
    body = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    header = body[0].split(",")
    return header, [ln.split(",") for ln in body[1:]]


_PALETTE = ("#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(csv_text, x_col, y_col, series_col, title="", xlabel=None, ylabel=None,
               width=640, height=420):
    """Line plot with one polyline per distinct value of ``series_col``.

    All coordinates are taken from the CSV text, so the figure cannot
    disagree with the data file.
    """
    header, rows = read_csv_rows(csv_text)
    ix, iy, isr = header.index(x_col), header.index(y_col), header.index(series_col)
    series = {}
    for row in rows:
        x, y = float(row[ix]), float(row[iy])
        if math.isfinite(x) and math.isfinite(y):
            series.setdefault(row[isr], []).append((x, y))
    pts = [p for s in series.values() for p in s]
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    if pts:
        x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
        y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    else:
        x0 = x1 = y0 = y1 = 0.0
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def sx(x):
        return left + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="20" text-anchor="middle">{escape(title)}</text>',
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="black"/>',
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="black"/>',
    ]
    for k in range(5):
        xv = x0 + (x1 - x0) * k / 4
        yv = y0 + (y1 - y0) * k / 4
        out.append(f'<text x="{sx(xv):.2f}" y="{top + ph + 16}" text-anchor="middle">{fmt(float(f"{xv:.4g}"))}</text>')
        out.append(f'<text x="{left - 6}" y="{sy(yv) + 4:.2f}" text-anchor="end">{fmt(float(f"{yv:.4g}"))}</text>')
    out.append(
        f'<text x="{left + pw / 2:.1f}" y="{height - 10}" text-anchor="middle">'
        f"{escape(xlabel or x_col)}</text>"
    )
    out.append(
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{escape(ylabel or y_col)}</text>'
    )
    for n, (name, s) in enumerate(series.items()):
        color = _PALETTE[n % len(_PALETTE)]
        coords = " ".join(f"{sx(x):.3f},{sy(y):.3f}" for x, y in s)
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
            f'data-series="{escape(name)}" points="{coords}"/>'
        )
        out.append(
            f'<text x="{left + pw - 4}" y="{top + 14 + 14 * n}" text-anchor="end" '
            f'fill="{color}">{escape(series_col)}={escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
