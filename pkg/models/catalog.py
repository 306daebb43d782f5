"""
Shipped example graphics and randomized valid graphics.

Curved pieces are assembled from Bezier quarter arcs; every example is a
closed, generic graphic that passes validation.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .graphic import (
    Component,
    FoldType,
    Graphic,
    GraphicTransform,
    Segment,
    SheetSide,
    VertexKind,
)

# Control-point distance of the cubic quarter-circle approximation.
KAPPA = 4.0 * (math.sqrt(2.0) - 1.0) / 3.0


def _single(segments: Sequence[Segment], kinds: Optional[Sequence[VertexKind]] = None) -> Graphic:
    kinds = kinds or [VertexKind.SMOOTH] * len(segments)
    return Graphic((Component.from_segments(list(segments), kinds),))


def ellipse(
    center=(0.0, 0.0),
    radii=(1.0, 1.0),
    fold: FoldType = FoldType.DEFINITE,
    sheet: SheetSide = SheetSide.LEFT,
    tilt: float = 0.0,
) -> Graphic:
    """Counterclockwise ellipse of four quarter arcs with vertices at 45, 135, 225 and 315 degrees."""
    segments = []
    for i in range(4):
        alpha = math.pi / 4.0 + i * math.pi / 2.0
        beta = alpha + math.pi / 2.0
        p0 = np.array([math.cos(alpha), math.sin(alpha)])
        p3 = np.array([math.cos(beta), math.sin(beta)])
        p1 = p0 + KAPPA * np.array([-math.sin(alpha), math.cos(alpha)])
        p2 = p3 - KAPPA * np.array([-math.sin(beta), math.cos(beta)])
        segments.append(Segment(tuple((float(p[0]), float(p[1])) for p in (p0, p1, p2, p3)), fold, sheet))
    unit = _single(segments)
    stretch = np.diag([float(radii[0]), float(radii[1])])
    return unit.transformed(stretch).rotated(tilt).translated(center)


def oval() -> Graphic:
    """Unit definite circle, interior sheet: genus 0 throughout."""
    return ellipse()


def _bean_segments(fold: FoldType, sheet: SheetSide) -> List[Segment]:
    k = KAPPA
    controls = [
        ((1.0, 1.0), (0.6, 1.0), (0.4, 0.7), (0.0, 0.7)),
        ((0.0, 0.7), (-0.4, 0.7), (-0.6, 1.0), (-1.0, 1.0)),
        ((-1.0, 1.0), (-1.0 - 0.6 * k, 1.0), (-1.6, k), (-1.6, 0.0)),
        ((-1.6, 0.0), (-1.6, -1.2 * k), (-1.6 * k, -1.2), (0.0, -1.2)),
        ((0.0, -1.2), (1.6 * k, -1.2), (1.6, -1.2 * k), (1.6, 0.0)),
        ((1.6, 0.0), (1.6, k), (1.0 + 0.6 * k, 1.0), (1.0, 1.0)),
    ]
    return [Segment(c, fold, sheet) for c in controls]


def bean(fold: FoldType = FoldType.INDEFINITE, sheet: SheetSide = SheetSide.LEFT) -> Graphic:
    """Closed curve with a dent on top: two inflections and one self doubly tangent line."""
    return _single(_bean_segments(fold, sheet))


WIGGLE_TILT = -math.pi / 4.0


def wiggle() -> Graphic:
    """Indefinite bean around a small definite oval, tilted so both inflections have negative slope."""
    inner = ellipse(center=(0.0, -0.6), radii=(0.25, 0.2))
    return bean().merged(inner).rotated(WIGGLE_TILT)


def definite_wiggle() -> Graphic:
    """The bean drawn as a single definite edge; its inflections do not change the genus."""
    return bean(FoldType.DEFINITE).rotated(WIGGLE_TILT)


CUSP_TILT = math.radians(105.0)


def crescent() -> Graphic:
    """Definite and indefinite edge joined by a type one and a type two cusp."""
    definite = Segment(((0.0, 0.0), (1.5, 0.0), (3.0, 1.0), (4.0, 2.0)), FoldType.DEFINITE, SheetSide.RIGHT)
    indefinite = Segment(((4.0, 2.0), (3.0, 1.0), (2.5, 0.0), (0.0, 0.0)), FoldType.INDEFINITE, SheetSide.LEFT)
    return _single([definite, indefinite], [VertexKind.CUSP, VertexKind.CUSP]).rotated(CUSP_TILT)


def cusp_pair() -> Graphic:
    return crescent().merged(ellipse(center=(3.0, 0.0)))


def bitangent_pair() -> Graphic:
    """Definite and indefinite circle; only doubly tangent lines occur during the sweep."""
    return ellipse().merged(ellipse(center=(3.0, -1.2), radii=(0.6, 0.6), fold=FoldType.INDEFINITE))


def random_graphic(rng: np.random.Generator) -> Graphic:
    """
    A valid graphic: one definite ellipse plus up to two indefinite ellipses
    and optionally a tilted indefinite bean, each in its own grid cell.
    """
    pieces: List[Graphic] = [
        ellipse(radii=rng.uniform(0.5, 1.2, size=2), tilt=rng.uniform(0.0, math.pi)),
    ]
    for _ in range(int(rng.integers(0, 3))):
        pieces.append(ellipse(
            radii=rng.uniform(0.3, 1.0, size=2),
            fold=FoldType.INDEFINITE,
            sheet=SheetSide.LEFT if rng.random() < 0.5 else SheetSide.RIGHT,
            tilt=rng.uniform(0.0, math.pi),
        ))
    if rng.random() < 0.5:
        transform = GraphicTransform(rotation=rng.uniform(0.0, 2.0 * math.pi), scale=rng.uniform(0.5, 0.8))
        pieces.append(transform.apply(bean()))

    graphic: Optional[Graphic] = None
    for cell, piece in enumerate(pieces):
        jitter = rng.uniform(-0.3, 0.3, size=2)
        placed = piece.translated((4.0 * cell + jitter[0], jitter[1]))
        graphic = placed if graphic is None else graphic.merged(placed)
    return graphic


def get_example_factories() -> Dict[str, Callable[[], Graphic]]:
    """Return factory map for the shipped example graphics."""
    return {
        'oval': oval,
        'wiggle': wiggle,
        'cusp-pair': cusp_pair,
        'bitangent-pair': bitangent_pair,
    }


def get_extra_factories() -> Dict[str, Callable[[], Graphic]]:
    """Additional graphics used by tests and demonstrations."""
    return {
        'bean': bean,
        'definite-wiggle': definite_wiggle,
        'crescent': crescent,
    }
