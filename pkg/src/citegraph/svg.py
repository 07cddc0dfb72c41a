"""SVG rendering of a timeline layout for the batch CLI."""

from __future__ import annotations

from .clustering import UNASSIGNED, Clustering
from .layout import LayoutResult

# Fixed palette, cycled per cluster id; grey is reserved for unassigned.
PALETTE = (
    "#1f77b4",  # blue
    "#9467bd",  # purple
    "#2ca02c",  # green
    "#ff7f0e",  # orange
    "#bcbd22",  # yellow-green
    "#e377c2",  # pink
    "#17becf",  # cyan
    "#8c564b",  # brown
    "#d62728",  # red
)
GREY = "#999999"

_MARGIN = 60.0
_WIDTH = 960.0
_ROW = 70.0
_RADIUS = 6.0


def cluster_color(cluster: int | None) -> str:
    if cluster is None or cluster == UNASSIGNED:
        return GREY
    return PALETTE[cluster % len(PALETTE)]


def render_svg(result: LayoutResult, clustering: Clustering | None = None) -> str:
    """Deterministic SVG: labeled circles on year rows (oldest on top),
    curved citation edges, fill color per cluster, grey when unassigned."""
    n_layers = max(len(result.layer_years), 1)
    height = 2 * _MARGIN + (n_layers - 1) * _ROW
    width = 2 * _MARGIN + _WIDTH

    def px(x: float) -> float:
        return _MARGIN + x * _WIDTH

    def py(layer: int) -> float:
        return _MARGIN + layer * _ROW

    pos = {p.id: (px(p.x), py(p.layer)) for p in result.nodes}

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" height="{height:.0f}" '
        f'viewBox="0 0 {width:.0f} {height:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    for i, year in enumerate(result.layer_years):
        parts.append(
            f'<text x="10" y="{py(i) + 4:.1f}" font-size="12" fill="#666" '
            f'font-family="sans-serif">{year}</text>'
        )
    for citing, cited in result.edges:
        x1, y1 = pos[citing]
        x2, y2 = pos[cited]
        mid = (y1 + y2) / 2.0
        parts.append(
            f'<path d="M {x1:.2f} {y1:.2f} C {x1:.2f} {mid:.2f}, {x2:.2f} {mid:.2f}, '
            f'{x2:.2f} {y2:.2f}" fill="none" stroke="#bbbbbb" stroke-width="1"/>'
        )
    assignment = clustering.assignment if clustering is not None else {}
    for p in result.nodes:
        xpx, ypx = pos[p.id]
        color = cluster_color(assignment.get(p.id)) if clustering is not None else PALETTE[0]
        parts.append(
            f'<circle cx="{xpx:.2f}" cy="{ypx:.2f}" r="{_RADIUS}" fill="{color}" '
            f'stroke="#333" stroke-width="0.5"/>'
        )
        parts.append(
            f'<text x="{xpx:.2f}" y="{ypx + _RADIUS + 12:.2f}" font-size="11" '
            f'text-anchor="middle" font-family="sans-serif">{_esc(p.label)}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _esc(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
