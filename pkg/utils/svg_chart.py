# utils/svg_chart.py
import logging
from xml.sax.saxutils import escape

import pandas as pd

from helpers.constants import FALLBACK_COLOR, METHOD_COLORS, SVG_HEIGHT, SVG_MARGIN, SVG_WIDTH

logger = logging.getLogger(__name__)

Y_TICKS = 5
CAP_HALF_WIDTH = 4


def _fmt(value: float) -> str:
    return f"{value:.2f}".rstrip("0").rstrip(".")


def _span(low: float, high: float) -> tuple[float, float]:
    if high - low < 1e-12:
        return low - 1.0, high + 1.0
    pad = (high - low) * 0.05
    return low - pad, high + pad


def line_chart(
    summary: pd.DataFrame,
    std_multiplier: float,
    title: str,
    x_label: str,
    y_label: str,
    value_column: str = "mean",
    std_column: str = "std",
) -> str:
    """
    Renders one polyline per method with error bars of +- std_multiplier * std.

    `summary` needs the columns method, param, plus the value and std columns.
    Methods and points are drawn in sorted order so the output is byte-stable.
    """
    plot_w = SVG_WIDTH - 2 * SVG_MARGIN
    plot_h = SVG_HEIGHT - 2 * SVG_MARGIN
    params = sorted(summary["param"].unique())
    spread = summary[std_column] * std_multiplier
    x_low, x_high = _span(float(min(params)), float(max(params)))
    y_low, y_high = _span(float((summary[value_column] - spread).min()), float((summary[value_column] + spread).max()))

    def sx(x: float) -> float:
        return SVG_MARGIN + (x - x_low) / (x_high - x_low) * plot_w

    def sy(y: float) -> float:
        return SVG_HEIGHT - SVG_MARGIN - (y - y_low) / (y_high - y_low) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<text x="{SVG_WIDTH / 2:.1f}" y="{SVG_MARGIN / 2:.1f}" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]

    # --- Axes ---
    bottom = SVG_HEIGHT - SVG_MARGIN
    parts.append(f'<line x1="{SVG_MARGIN}" y1="{bottom}" x2="{SVG_WIDTH - SVG_MARGIN}" y2="{bottom}" stroke="black"/>')
    parts.append(f'<line x1="{SVG_MARGIN}" y1="{SVG_MARGIN}" x2="{SVG_MARGIN}" y2="{bottom}" stroke="black"/>')
    for p in params:
        x = sx(float(p))
        parts.append(f'<line x1="{x:.1f}" y1="{bottom}" x2="{x:.1f}" y2="{bottom + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{bottom + 18}" text-anchor="middle">{_fmt(float(p))}</text>')
    for i in range(Y_TICKS + 1):
        value = y_low + (y_high - y_low) * i / Y_TICKS
        y = sy(value)
        parts.append(f'<line x1="{SVG_MARGIN - 5}" y1="{y:.1f}" x2="{SVG_MARGIN}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{SVG_MARGIN - 8}" y="{y + 4:.1f}" text-anchor="end">{_fmt(value)}</text>')
    parts.append(f'<text x="{SVG_WIDTH / 2:.1f}" y="{SVG_HEIGHT - 12}" text-anchor="middle">{escape(x_label)}</text>')
    parts.append(
        f'<text x="14" y="{SVG_HEIGHT / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {SVG_HEIGHT / 2:.1f})">{escape(y_label)}</text>'
    )

    # --- Series ---
    for index, (method, rows) in enumerate(sorted(summary.groupby("method"), key=lambda item: item[0])):
        color = METHOD_COLORS.get(method, FALLBACK_COLOR)
        rows = rows.sort_values("param")
        points = [(sx(float(p)), sy(float(m))) for p, m in zip(rows["param"], rows[value_column])]
        parts.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="2" points="'
            + " ".join(f"{x:.1f},{y:.1f}" for x, y in points) + '"/>'
        )
        for (x, y), mean, std in zip(points, rows[value_column], rows[std_column]):
            top, low = sy(float(mean + std * std_multiplier)), sy(float(mean - std * std_multiplier))
            parts.append(f'<line x1="{x:.1f}" y1="{top:.1f}" x2="{x:.1f}" y2="{low:.1f}" stroke="{color}"/>')
            for cap in (top, low):
                parts.append(
                    f'<line x1="{x - CAP_HALF_WIDTH:.1f}" y1="{cap:.1f}" x2="{x + CAP_HALF_WIDTH:.1f}" y2="{cap:.1f}" stroke="{color}"/>'
                )
            parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="{color}"/>')
        legend_y = SVG_MARGIN + 16 * index
        legend_x = SVG_WIDTH - SVG_MARGIN - 120
        parts.append(f'<rect x="{legend_x}" y="{legend_y - 9}" width="10" height="10" fill="{color}"/>')
        parts.append(f'<text x="{legend_x + 16}" y="{legend_y}">{escape(str(method))}</text>')

    parts.append("</svg>")
    logger.debug(f"Rendered chart '{title}' with {summary['method'].nunique()} series.")
    return "\n".join(parts) + "\n"
