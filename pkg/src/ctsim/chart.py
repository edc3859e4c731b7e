"""Hand-rolled deterministic SVG line charts.

No plotting dependency: a fixed palette, fixed geometry and fixed-precision
coordinates make reruns byte-identical, which the regression tests rely on.
"""

from __future__ import annotations

from dataclasses import dataclass

WIDTH, HEIGHT = 640, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 72, 24, 28, 56

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
# Solid, dashed, dot-dashed, dotted: mirrors the usual curve-style rotation.
DASHES = ("", "8,5", "8,3,2,3", "2,4", "12,3", "5,2,1,2")


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    markers: bool = False

    def __post_init__(self):
        if len(self.xs) != len(self.ys):
            raise ValueError("series x and y lengths differ")


@dataclass(frozen=True)
class Guide:
    """Dashed horizontal reference line with an optional text label."""

    y: float
    label: str = ""


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    return [lo + (hi - lo) * i / (count - 1) for i in range(count)]


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def render_chart(
    series: list[Series],
    x_label: str,
    y_label: str,
    guides: tuple[Guide, ...] = (),
) -> str:
    """Render series as an SVG document string."""
    xs = [x for s in series for x in s.xs]
    ys = [y for s in series for y in s.ys]
    ys += [g.y for g in guides]
    x_lo, x_hi = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y_lo, y_hi = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x_hi - x_lo < 1e-12:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    pad = 0.05 * (y_hi - y_lo) or 0.5
    y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        f'fill="none" stroke="black" stroke-width="1"/>',
    ]

    for tx in _ticks(x_lo, x_hi):
        x = _fmt(px(tx))
        y0, y1 = HEIGHT - MARGIN_B, HEIGHT - MARGIN_B + 5
        out.append(f'<line x1="{x}" y1="{y0}" x2="{x}" y2="{y1}" stroke="black"/>')
        out.append(
            f'<text x="{x}" y="{y1 + 14}" font-size="12" text-anchor="middle" '
            f'font-family="sans-serif">{tx:.3g}</text>'
        )
    for ty in _ticks(y_lo, y_hi):
        y = _fmt(py(ty))
        out.append(f'<line x1="{MARGIN_L - 5}" y1="{y}" x2="{MARGIN_L}" y2="{y}" stroke="black"/>')
        out.append(
            f'<text x="{MARGIN_L - 8}" y="{y}" font-size="12" text-anchor="end" '
            f'dominant-baseline="middle" font-family="sans-serif">{ty:.3g}</text>'
        )

    out.append(
        f'<text x="{MARGIN_L + plot_w / 2:.1f}" y="{HEIGHT - 12}" font-size="14" '
        f'text-anchor="middle" font-family="sans-serif">{_escape(x_label)}</text>'
    )
    out.append(
        f'<text x="18" y="{MARGIN_T + plot_h / 2:.1f}" font-size="14" text-anchor="middle" '
        f'font-family="sans-serif" transform="rotate(-90 18 {MARGIN_T + plot_h / 2:.1f})">'
        f"{_escape(y_label)}</text>"
    )

    for g in guides:
        y = _fmt(py(g.y))
        out.append(
            f'<line x1="{MARGIN_L}" y1="{y}" x2="{MARGIN_L + plot_w}" y2="{y}" '
            f'stroke="gray" stroke-width="1" stroke-dasharray="6,4"/>'
        )
        if g.label:
            out.append(
                f'<text x="{MARGIN_L + plot_w - 4}" y="{float(y) - 4:.2f}" font-size="11" '
                f'text-anchor="end" fill="gray" font-family="sans-serif">{_escape(g.label)}</text>'
            )

    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        dash = DASHES[idx % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(s.xs, s.ys))
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5"{dash_attr}/>'
        )
        if s.markers:
            for x, y in zip(s.xs, s.ys):
                out.append(
                    f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(y))}" r="3" '
                    f'fill="none" stroke="{color}"/>'
                )

    for idx, s in enumerate(series):
        color = PALETTE[idx % len(PALETTE)]
        y = MARGIN_T + 16 + 16 * idx
        x0, x1 = WIDTH - MARGIN_R - 150, WIDTH - MARGIN_R - 120
        dash = DASHES[idx % len(DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        out.append(
            f'<line x1="{x0}" y1="{y}" x2="{x1}" y2="{y}" stroke="{color}" '
            f'stroke-width="1.5"{dash_attr}/>'
        )
        out.append(
            f'<text x="{x1 + 6}" y="{y + 4}" font-size="12" font-family="sans-serif">'
            f"{_escape(s.label)}</text>"
        )

    out.append("</svg>")
    return "\n".join(out) + "\n"
