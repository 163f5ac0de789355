"""CSV and SVG emission for region grids and comparative sweeps.

SVG is hand-emitted primitive shapes with fixed number formatting so output
is byte-stable and suitable for golden-file comparison.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .classifier import RegionGrid, RegionLabel

CSV_HEADER = "c_R,c_D,label,margin_efficient,margin_cd,margin_joint"

# Both collapses onto the efficient-peace color for figure reproduction;
# the CSV keeps the raw labels.
_FILL = {
    RegionLabel.WAR: "#c0392b",
    RegionLabel.INEFFICIENT_PEACE: "#e8a33d",
    RegionLabel.EFFICIENT_PEACE: "#2e8b57",
    RegionLabel.BOTH: "#2e8b57",
    RegionLabel.SKIPPED: "#bbbbbb",
}
_LEGEND = (
    (RegionLabel.WAR, "War"),
    (RegionLabel.INEFFICIENT_PEACE, "Inefficient peace"),
    (RegionLabel.EFFICIENT_PEACE, "Efficient peace"),
)


def _num(x: float) -> str:
    if isinstance(x, float) and math.isnan(x):
        return "nan"
    return format(x, ".12g")


def csv_rows(grid: RegionGrid) -> list[str]:
    """One row per cell, ordered by increasing c_D then c_R."""
    rows = []
    for i, cd in enumerate(grid.cd_values):
        for j, cr in enumerate(grid.cr_values):
            rows.append(",".join([
                _num(cr), _num(cd), grid.labels[i][j].value,
                _num(grid.margins_efficient[i][j]),
                _num(grid.margins_cd[i][j]),
                _num(grid.margins_joint[i][j]),
            ]))
    return rows


def emit_csv(grid: RegionGrid, path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in csv_rows(grid):
            fh.write(row + "\n")


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str          # regions | mu-shift | p-shift
    title: str
    knob: Optional[str] = None
    values: tuple[float, ...] = ()


_PLOT_W = 320.0
_PLOT_H = 280.0
_MARGIN_L = 64.0
_MARGIN_T = 36.0
_MARGIN_B = 64.0
_PANEL_GAP = 28.0
_LEGEND_H = 30.0


def _px(v: float) -> str:
    return f"{v:.2f}"


def _panel_svg(grid: RegionGrid, x0: float, y0: float, subtitle: str) -> list[str]:
    cr_lo, cr_hi = grid.cr_range
    cd_lo, cd_hi = grid.cd_range

    def sx(cr: float) -> float:
        return x0 + (cr - cr_lo) / (cr_hi - cr_lo) * _PLOT_W

    def sy(cd: float) -> float:
        return y0 + _PLOT_H - (cd - cd_lo) / (cd_hi - cd_lo) * _PLOT_H

    n_cd = len(grid.cd_values)
    n_cr = len(grid.cr_values)
    cw = _PLOT_W / n_cr
    ch = _PLOT_H / n_cd
    parts = []
    for i in range(n_cd):
        for j in range(n_cr):
            fill = _FILL[grid.labels[i][j]]
            x = x0 + j * cw
            y = y0 + _PLOT_H - (i + 1) * ch
            parts.append(f'<rect x="{_px(x)}" y="{_px(y)}" width="{_px(cw)}" '
                         f'height="{_px(ch)}" fill="{fill}"/>')
    # frame
    parts.append(f'<rect x="{_px(x0)}" y="{_px(y0)}" width="{_px(_PLOT_W)}" '
                 f'height="{_px(_PLOT_H)}" fill="none" stroke="#222" '
                 f'stroke-width="1"/>')
    # dashed horizontal boundaries at the two responder-cost thresholds
    for value, name in ((grid.cbar_D, "upper"), (grid.clow_D, "lower")):
        if cd_lo <= value <= cd_hi:
            y = sy(value)
            parts.append(f'<line x1="{_px(x0)}" y1="{_px(y)}" '
                         f'x2="{_px(x0 + _PLOT_W)}" y2="{_px(y)}" '
                         f'stroke="#111" stroke-width="1.5" '
                         f'stroke-dasharray="6,4"/>')
            parts.append(f'<text x="{_px(x0 + _PLOT_W + 4)}" y="{_px(y + 4)}" '
                         f'font-size="11" fill="#111">{name}</text>')
    # slanted joint-cost boundary c_D + c_R = Clow, when it crosses the box
    clow = grid.Clow
    pts = []
    for cr in (cr_lo, cr_hi):
        cd = clow - cr
        if cd_lo <= cd <= cd_hi:
            pts.append((cr, cd))
    for cd in (cd_lo, cd_hi):
        cr = clow - cd
        if cr_lo < cr < cr_hi:
            pts.append((cr, cd))
    if len(pts) >= 2:
        (a_cr, a_cd), (b_cr, b_cd) = pts[0], pts[-1]
        parts.append(f'<line x1="{_px(sx(a_cr))}" y1="{_px(sy(a_cd))}" '
                     f'x2="{_px(sx(b_cr))}" y2="{_px(sy(b_cd))}" '
                     f'stroke="#111" stroke-width="1.5" '
                     f'stroke-dasharray="2,3"/>')
    # axes annotation
    parts.append(f'<text x="{_px(x0 + _PLOT_W / 2)}" y="{_px(y0 + _PLOT_H + 30)}" '
                 f'font-size="13" text-anchor="middle" fill="#111">c_R</text>')
    parts.append(f'<text x="{_px(x0 - 44)}" y="{_px(y0 + _PLOT_H / 2)}" '
                 f'font-size="13" text-anchor="middle" fill="#111" '
                 f'transform="rotate(-90 {_px(x0 - 44)} {_px(y0 + _PLOT_H / 2)})"'
                 f'>c_D</text>')
    for cr in (cr_lo, cr_hi):
        parts.append(f'<text x="{_px(sx(cr))}" y="{_px(y0 + _PLOT_H + 14)}" '
                     f'font-size="10" text-anchor="middle" fill="#333">'
                     f'{format(cr, ".6g")}</text>')
    for cd in (cd_lo, cd_hi):
        parts.append(f'<text x="{_px(x0 - 6)}" y="{_px(sy(cd) + 3)}" '
                     f'font-size="10" text-anchor="end" fill="#333">'
                     f'{format(cd, ".6g")}</text>')
    parts.append(f'<text x="{_px(x0 + _PLOT_W / 2)}" y="{_px(y0 - 10)}" '
                 f'font-size="13" text-anchor="middle" fill="#111">'
                 f'{subtitle}</text>')
    return parts


def render_svg(panels: Sequence[tuple[str, RegionGrid]], title: str) -> str:
    n = len(panels)
    if n == 0:
        raise ValueError("at least one panel required")
    width = _MARGIN_L + n * _PLOT_W + (n - 1) * _PANEL_GAP + _MARGIN_L
    height = _MARGIN_T + _PLOT_H + _MARGIN_B + _LEGEND_H
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_px(width)}" '
        f'height="{_px(height)}" viewBox="0 0 {_px(width)} {_px(height)}">',
        f'<rect x="0" y="0" width="{_px(width)}" height="{_px(height)}" '
        f'fill="#ffffff"/>',
        f'<text x="{_px(width / 2)}" y="20" font-size="15" '
        f'text-anchor="middle" fill="#111">{title}</text>',
    ]
    for k, (subtitle, grid) in enumerate(panels):
        x0 = _MARGIN_L + k * (_PLOT_W + _PANEL_GAP)
        parts.extend(_panel_svg(grid, x0, _MARGIN_T + 16, subtitle))
    # legend
    lx = _MARGIN_L
    ly = height - _LEGEND_H + 8
    for label, text in _LEGEND:
        parts.append(f'<rect x="{_px(lx)}" y="{_px(ly)}" width="14" height="14" '
                     f'fill="{_FILL[label]}" stroke="#222" stroke-width="0.5"/>')
        parts.append(f'<text x="{_px(lx + 20)}" y="{_px(ly + 11)}" '
                     f'font-size="12" fill="#111">{text}</text>')
        lx += 20 + 8 * len(text) + 30
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def emit_svg(panels: Sequence[tuple[str, RegionGrid]], spec: FigureSpec,
             path: str) -> None:
    svg = render_svg(panels, spec.title)
    with open(path, "w") as fh:
        fh.write(svg)
