"""
VISUAL-001: SVG canvas
Minimal chart canvas: linear axes, polylines, shaded bands, legend.
"""

from html import escape
from typing import List, Optional, Sequence, Tuple

import numpy as np

SVG_NS = "http://www.w3.org/2000/svg"

PALETTE = {
    "reinforced": "#1f77b4",
    "vanilla": "#2ca02c",
    "ar-noise": "#d62728",
    "realized": "#000000",
    "mixture": "#444444",
    "kl": "#1f77b4",
    "w1": "#d62728",
}
FALLBACK_COLORS = ["#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]


def fmt_num(value: float) -> str:
    """Compact fixed-point number (no exponent, no trailing zeros)."""
    text = f"{float(value):.2f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def color_for(name: str, index: int = 0) -> str:
    return PALETTE.get(name, FALLBACK_COLORS[index % len(FALLBACK_COLORS)])


def nice_ticks(lo: float, hi: float, count: int = 5) -> List[float]:
    """Round tick positions covering [lo, hi]."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(count, 1)
    magnitude = 10 ** np.floor(np.log10(raw))
    step = min((m * magnitude for m in (1, 2, 5, 10) if m * magnitude >= raw), default=raw)
    start = np.ceil(lo / step) * step
    ticks = np.arange(start, hi + step * 1e-9, step)
    return [float(np.round(t, 10)) for t in ticks]


class SvgCanvas:
    """
    Fixed-size chart with a plotting area mapped to data ranges.

    Args:
        x_range: (min, max) of the data x axis
        y_range: (min, max) of the data y axis
        title: chart title
        x_label / y_label: axis captions
    """

    def __init__(
        self,
        x_range: Tuple[float, float],
        y_range: Tuple[float, float],
        title: str = "",
        x_label: str = "",
        y_label: str = "",
        width: int = 720,
        height: int = 420,
    ):
        self.width = width
        self.height = height
        self.left, self.right, self.top, self.bottom = 70, 150, 40, 55
        x0, x1 = map(float, x_range)
        y0, y1 = map(float, y_range)
        if x1 <= x0:
            x1 = x0 + 1.0
        if y1 <= y0:
            y1 = y0 + 1.0
        self.x_range = (x0, x1)
        self.y_range = (y0, y1)
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.elements: List[str] = []
        self.legend: List[Tuple[str, str, bool]] = []

    # data -> pixel
    def px(self, x) -> np.ndarray:
        x0, x1 = self.x_range
        span = self.width - self.left - self.right
        return self.left + (np.asarray(x, dtype=np.float64) - x0) / (x1 - x0) * span

    def py(self, y) -> np.ndarray:
        y0, y1 = self.y_range
        span = self.height - self.top - self.bottom
        return self.height - self.bottom - (np.asarray(y, dtype=np.float64) - y0) / (y1 - y0) * span

    def _points(self, xs, ys) -> str:
        return " ".join(f"{fmt_num(a)},{fmt_num(b)}" for a, b in zip(self.px(xs), self.py(ys)))

    def polyline(self, xs, ys, color: str, label: Optional[str] = None,
                 dashed: bool = False, stroke_width: float = 2.0):
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        self.elements.append(
            f'<polyline points="{self._points(xs, ys)}" fill="none" stroke="{color}" '
            f'stroke-width="{fmt_num(stroke_width)}"{dash}/>'
        )
        if label:
            self.legend.append((label, color, False))

    def band(self, xs, lower, upper, color: str, label: Optional[str] = None, opacity: float = 0.25):
        xs = np.asarray(xs, dtype=np.float64)
        outline = self._points(np.concatenate([xs, xs[::-1]]),
                               np.concatenate([np.asarray(upper), np.asarray(lower)[::-1]]))
        self.elements.append(
            f'<polygon points="{outline}" fill="{color}" fill-opacity="{fmt_num(opacity)}" stroke="none"/>'
        )
        if label:
            self.legend.append((label, color, True))

    def vline(self, x: float, color: str, label: Optional[str] = None):
        px = fmt_num(self.px(x))
        self.elements.append(
            f'<line x1="{px}" y1="{fmt_num(self.top)}" x2="{px}" '
            f'y2="{fmt_num(self.height - self.bottom)}" stroke="{color}" stroke-width="2" '
            f'stroke-dasharray="2,3"/>'
        )
        if label:
            self.legend.append((label, color, False))

    def _axes(self) -> List[str]:
        out = []
        x_axis_y = fmt_num(self.height - self.bottom)
        out.append(
            f'<line x1="{self.left}" y1="{x_axis_y}" x2="{self.width - self.right}" '
            f'y2="{x_axis_y}" stroke="#333333"/>'
        )
        out.append(
            f'<line x1="{self.left}" y1="{self.top}" x2="{self.left}" y2="{x_axis_y}" stroke="#333333"/>'
        )
        for tick in nice_ticks(*self.x_range):
            x = fmt_num(self.px(tick))
            out.append(
                f'<text x="{x}" y="{fmt_num(self.height - self.bottom + 18)}" font-size="11" '
                f'text-anchor="middle">{escape(f"{tick:g}")}</text>'
            )
        for tick in nice_ticks(*self.y_range):
            y = fmt_num(self.py(tick))
            out.append(
                f'<text x="{self.left - 8}" y="{y}" font-size="11" text-anchor="end">'
                f'{escape(f"{tick:g}")}</text>'
            )
            out.append(
                f'<line x1="{self.left}" y1="{y}" x2="{self.width - self.right}" y2="{y}" '
                f'stroke="#dddddd" stroke-width="0.5"/>'
            )
        out.append(
            f'<text x="{fmt_num((self.left + self.width - self.right) / 2)}" '
            f'y="{self.height - 12}" font-size="12" text-anchor="middle">{escape(self.x_label)}</text>'
        )
        out.append(
            f'<text x="16" y="{fmt_num((self.top + self.height - self.bottom) / 2)}" font-size="12" '
            f'text-anchor="middle" transform="rotate(-90 16 {fmt_num((self.top + self.height - self.bottom) / 2)})">'
            f"{escape(self.y_label)}</text>"
        )
        return out

    def _legend(self) -> List[str]:
        out = []
        x = self.width - self.right + 12
        for i, (label, color, filled) in enumerate(self.legend):
            y = self.top + 10 + 20 * i
            if filled:
                out.append(f'<rect x="{x}" y="{y - 6}" width="18" height="10" fill="{color}" fill-opacity="0.35"/>')
            else:
                out.append(f'<line x1="{x}" y1="{y}" x2="{x + 18}" y2="{y}" stroke="{color}" stroke-width="2"/>')
            out.append(f'<text x="{x + 24}" y="{y + 4}" font-size="11">{escape(label)}</text>')
        return out

    def render(self) -> str:
        parts = [
            f'<svg xmlns="{SVG_NS}" width="{self.width}" height="{self.height}" '
            f'viewBox="0 0 {self.width} {self.height}">',
            f'<rect width="{self.width}" height="{self.height}" fill="#ffffff"/>',
            f'<text x="{fmt_num(self.width / 2)}" y="22" font-size="14" text-anchor="middle" '
            f'font-weight="bold">{escape(self.title)}</text>',
        ]
        parts.extend(self._axes())
        parts.extend(self.elements)
        parts.extend(self._legend())
        parts.append("</svg>")
        return "\n".join(parts) + "\n"


def data_range(arrays: Sequence, pad: float = 0.05, floor: Optional[float] = None) -> Tuple[float, float]:
    values = np.concatenate([np.ravel(np.asarray(a, dtype=np.float64)) for a in arrays])
    values = values[np.isfinite(values)]
    if values.size == 0:
        return (0.0, 1.0)
    lo, hi = float(values.min()), float(values.max())
    margin = (hi - lo) * pad or 0.5
    lo, hi = lo - margin, hi + margin
    if floor is not None:
        lo = max(lo, floor)
    return lo, hi
