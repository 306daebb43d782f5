"""SVG 1.1 drawings of graphics, optionally with a rotated copy and its tangencies."""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from models.errors import DegenerateFlat
from models.graphic import Component, FoldType, Graphic, inflections

from .sweep_service import SweepService

LOGGER = logging.getLogger(__name__)

PREAMBLE = """\
<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN"
"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="%(width).3f" height="%(height).3f" viewBox="%(min_x).6f %(min_y).6f %(width).6f %(height).6f" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="%(min_x).6f" y="%(min_y).6f" width="%(width).6f" height="%(height).6f" style="fill:#ffffff"/>
"""

POSTAMBLE = "</svg>\n"

INDEX_COLORS = ("#1f77b4", "#2ca02c", "#ff7f0e", "#d62728")


class SvgCanvas:
    """Collects drawing commands in graphic coordinates; y is flipped on output."""

    def __init__(self, stroke_width: float = 0.02):
        self.min_x = self.max_x = self.min_y = self.max_y = None
        self.stroke_width = stroke_width
        self.commands: List[str] = []

    def require(self, x: float, y: float) -> None:
        if self.min_x is None:
            self.min_x = self.max_x = x
            self.min_y = self.max_y = y
        else:
            self.min_x, self.max_x = min(self.min_x, x), max(self.max_x, x)
            self.min_y, self.max_y = min(self.min_y, y), max(self.max_y, y)

    def _xy(self, point: Sequence[float]) -> str:
        x, y = float(point[0]), float(point[1])
        self.require(x, y)
        return f"{x:.6f},{-y:.6f}"

    def path(self, controls: Sequence[Sequence[Sequence[float]]], dashed: bool, closed: bool, color="#000000") -> None:
        parts = [f"M {self._xy(controls[0][0])}"]
        for bezier in controls:
            parts.append("C " + " ".join(self._xy(p) for p in bezier[1:]))
        if closed:
            parts.append("Z")
        dash = f";stroke-dasharray:{4 * self.stroke_width:.4f},{2 * self.stroke_width:.4f}" if dashed else ""
        self.commands.append(
            f'<path d="{" ".join(parts)}" style="fill:none;stroke:{color};stroke-width:{self.stroke_width:.4f}{dash}"/>'
        )

    def circle(self, point: Sequence[float], radius: float, stroke="#000000", fill="none") -> None:
        x, y = float(point[0]), float(point[1])
        self.require(x - radius, y - radius)
        self.require(x + radius, y + radius)
        self.commands.append(
            f'<circle cx="{x:.6f}" cy="{-y:.6f}" r="{radius:.6f}" '
            f'style="fill:{fill};stroke:{stroke};stroke-width:{self.stroke_width:.4f}"/>'
        )

    def square(self, point: Sequence[float], half: float, stroke="#000000") -> None:
        x, y = float(point[0]), float(point[1])
        self.require(x - half, y - half)
        self.require(x + half, y + half)
        self.commands.append(
            f'<rect x="{x - half:.6f}" y="{-y - half:.6f}" width="{2 * half:.6f}" height="{2 * half:.6f}" '
            f'style="fill:none;stroke:{stroke};stroke-width:{self.stroke_width:.4f}"/>'
        )

    def line(self, a: Sequence[float], b: Sequence[float], color="#999999") -> None:
        self.commands.append(
            f'<polyline points="{self._xy(a)} {self._xy(b)}" '
            f'style="fill:none;stroke:{color};stroke-width:{self.stroke_width / 2:.4f}"/>'
        )

    def render(self) -> str:
        if self.min_x is None:
            self.require(0.0, 0.0)
        pad = max(self.max_x - self.min_x, self.max_y - self.min_y, 1e-9) * 0.1
        min_x, min_y = self.min_x - pad, -self.max_y - pad
        width = self.max_x - self.min_x + 2 * pad
        height = self.max_y - self.min_y + 2 * pad
        return PREAMBLE % locals() + "\n".join(self.commands) + "\n" + POSTAMBLE

    def save(self, filename) -> Path:
        target = Path(filename)
        target.write_text(self.render(), encoding="utf-8")
        return target


def _runs(component: Component) -> List[Tuple[FoldType, List[int]]]:
    """Maximal runs of consecutive segments with the same fold type."""
    n = len(component.segments)
    folds = [seg.fold for seg in component.segments]
    if all(f is folds[0] for f in folds):
        return [(folds[0], list(range(n)))]
    start = next(i for i in range(n) if folds[i] is not folds[i - 1])
    runs: List[Tuple[FoldType, List[int]]] = []
    for offset in range(n):
        i = (start + offset) % n
        if runs and runs[-1][0] is folds[i]:
            runs[-1][1].append(i)
        else:
            runs.append((folds[i], [i]))
    return runs


def draw_graphic(canvas: SvgCanvas, g: Graphic, marker: float) -> None:
    for ci, component in enumerate(g.components):
        runs = _runs(component)
        closed = len(runs) == 1
        for fold, indices in runs:
            controls = [component.segments[i].control for i in indices]
            canvas.path(controls, dashed=fold is FoldType.INDEFINITE, closed=closed)
    for _, vertex in g.cusps():
        canvas.circle(vertex.position, marker, stroke="#d62728")
    for _, seg in g.segments():
        try:
            points = inflections(seg)
        except DegenerateFlat:
            continue
        for point in points:
            canvas.square(point.point, marker, stroke="#9467bd")


def plot_svg(g: Graphic, angle: Optional[float] = None) -> str:
    """Draw g; with an angle, also draw the rotated copy to the right with its horizontal tangencies."""
    scale = g.scale
    canvas = SvgCanvas(stroke_width=scale * 0.004)
    marker = scale * 0.012
    draw_graphic(canvas, g, marker)
    if angle is not None:
        xs = [p[0] for _, seg in g.segments() for p in seg.control]
        rotated = g.rotated(angle)
        rxs = [p[0] for _, seg in rotated.segments() for p in seg.control]
        shift = (max(xs) - min(rxs) + 0.25 * scale, 0.0) if xs else (0.0, 0.0)
        moved = rotated.translated(shift)
        draw_graphic(canvas, moved, marker)
        for point in SweepService(g).critical_points(angle):
            x, y = point.point
            c, s = math.cos(angle), math.sin(angle)
            rx, ry = x * c - y * s + shift[0], x * s + y * c
            canvas.line((rx - 2 * marker, ry), (rx + 2 * marker, ry))
            canvas.circle((rx, ry), marker, stroke=INDEX_COLORS[point.index], fill=INDEX_COLORS[point.index])
    LOGGER.info("Rendered %d SVG element(s)", len(canvas.commands))
    return canvas.render()


def save_plot(g: Graphic, path, angle: Optional[float] = None) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(plot_svg(g, angle), encoding="utf-8")
    return target
