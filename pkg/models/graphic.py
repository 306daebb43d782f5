"""
Data model for abstract graphics of stable maps.

A graphic is a finite set of closed chains of cubic Bezier segments. Each
segment is a fold edge (definite or indefinite) and records which side of
its traversal direction carries the extra sheet(s) of the Reeb complex.
Consecutive segments meet at smooth vertices or at cusps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from models.errors import DegenerateFlat, IdenticallyZero, TangentialDegeneracy
from services.config_service import CONFIG
from utils.roots import Polynomial, real_roots

Point = Tuple[float, float]


class FoldType(str, Enum):
    DEFINITE = "definite"
    INDEFINITE = "indefinite"

    @property
    def opposite(self) -> "FoldType":
        return FoldType.INDEFINITE if self is FoldType.DEFINITE else FoldType.DEFINITE


class SheetSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def opposite(self) -> "SheetSide":
        return SheetSide.RIGHT if self is SheetSide.LEFT else SheetSide.LEFT


class VertexKind(str, Enum):
    SMOOTH = "smooth"
    CUSP = "cusp"


class CuspType(str, Enum):
    TYPE_ONE = "type_one"
    TYPE_TWO = "type_two"


class CrossingTag(str, Enum):
    ENTANGLED = "entangled"
    UNENTANGLED = "unentangled"


class SegmentRef(NamedTuple):
    component: int
    segment: int

    def __str__(self) -> str:
        return f"c{self.component}s{self.segment}"


class Inflection(NamedTuple):
    s: float
    point: Point
    slope: Optional[float]  # None means vertical
    direction: Point


def _rotation(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Segment:
    """Cubic Bezier fold edge, parameter s in [0, 1]."""

    control: Tuple[Point, Point, Point, Point]
    fold: FoldType
    sheet: SheetSide

    @cached_property
    def _points(self) -> np.ndarray:
        return np.array(self.control, dtype=float)

    @cached_property
    def power_basis(self) -> Tuple[Polynomial, Polynomial]:
        p0, p1, p2, p3 = self._points
        coeffs = np.array([
            p0,
            3.0 * (p1 - p0),
            3.0 * (p2 - 2.0 * p1 + p0),
            p3 - 3.0 * p2 + 3.0 * p1 - p0,
        ])
        return Polynomial.of(coeffs[:, 0]), Polynomial.of(coeffs[:, 1])

    @cached_property
    def first_derivative(self) -> Tuple[Polynomial, Polynomial]:
        x, y = self.power_basis
        return x.deriv(), y.deriv()

    @cached_property
    def second_derivative(self) -> Tuple[Polynomial, Polynomial]:
        dx, dy = self.first_derivative
        return dx.deriv(), dy.deriv()

    @cached_property
    def curvature_numerator(self) -> Polynomial:
        """x'y'' - x''y'; degree at most two for a cubic."""
        dx, dy = self.first_derivative
        ddx, ddy = self.second_derivative
        return dx * ddy - ddx * dy

    @property
    def start(self) -> Point:
        return self.control[0]

    @property
    def end(self) -> Point:
        return self.control[3]

    @cached_property
    def chord(self) -> float:
        return float(np.linalg.norm(self._points[3] - self._points[0]))

    @cached_property
    def hull_size(self) -> float:
        pts = self._points
        return float(np.max(np.ptp(pts, axis=0)))

    @cached_property
    def is_flat(self) -> bool:
        """Straight segment: curvature numerator vanishes relative to size squared."""
        numerator = self.curvature_numerator
        return numerator.is_zero or numerator.norm <= CONFIG.tol_geom * self.hull_size ** 2

    def point(self, s: float) -> np.ndarray:
        x, y = self.power_basis
        return np.array([float(x(s)), float(y(s))])

    def velocity(self, s: float) -> np.ndarray:
        dx, dy = self.first_derivative
        return np.array([float(dx(s)), float(dy(s))])

    def acceleration(self, s: float) -> np.ndarray:
        ddx, ddy = self.second_derivative
        return np.array([float(ddx(s)), float(ddy(s))])

    def unit_tangent(self, s: float) -> np.ndarray:
        v = self.velocity(s)
        return v / np.linalg.norm(v)

    def sheet_normal(self, s: float) -> np.ndarray:
        """Unit normal pointing to the sheet side at parameter s."""
        tx, ty = self.unit_tangent(s)
        left = np.array([-ty, tx])
        return left if self.sheet is SheetSide.LEFT else -left

    def height(self, t: float) -> Polynomial:
        """Height after rotating counterclockwise by t: x sin t + y cos t."""
        x, y = self.power_basis
        return x.scale(math.sin(t)) + y.scale(math.cos(t))

    def height_derivative(self, t: float) -> Polynomial:
        dx, dy = self.first_derivative
        return dx.scale(math.sin(t)) + dy.scale(math.cos(t))

    def height_second_derivative(self, t: float) -> Polynomial:
        ddx, ddy = self.second_derivative
        return ddx.scale(math.sin(t)) + ddy.scale(math.cos(t))

    def subdivide(self, s: float) -> Tuple["Segment", "Segment"]:
        """de Casteljau split at s."""
        p0, p1, p2, p3 = self._points
        a = p0 + (p1 - p0) * s
        b = p1 + (p2 - p1) * s
        c = p2 + (p3 - p2) * s
        d = a + (b - a) * s
        e = b + (c - b) * s
        f = d + (e - d) * s
        first = (tuple(p0), tuple(a), tuple(d), tuple(f))
        second = (tuple(f), tuple(e), tuple(c), tuple(p3))
        return (
            Segment(tuple(map(_as_point, first)), self.fold, self.sheet),
            Segment(tuple(map(_as_point, second)), self.fold, self.sheet),
        )

    def transformed(self, matrix: np.ndarray, offset: Sequence[float] = (0.0, 0.0)) -> "Segment":
        pts = self._points @ np.asarray(matrix, dtype=float).T + np.asarray(offset, dtype=float)
        sheet = self.sheet if np.linalg.det(matrix) > 0 else self.sheet.opposite
        return Segment(tuple(_as_point(p) for p in pts), self.fold, sheet)

    def reversed(self) -> "Segment":
        return Segment(tuple(reversed(self.control)), self.fold, self.sheet.opposite)


def _as_point(p) -> Point:
    return (float(p[0]), float(p[1]))


@dataclass(frozen=True)
class Vertex:
    """Joint between the end of `incoming` and the start of `outgoing`."""

    kind: VertexKind
    position: Point
    incoming: int
    outgoing: int


@dataclass(frozen=True)
class Component:
    segments: Tuple[Segment, ...]
    vertices: Tuple[Vertex, ...]

    @classmethod
    def from_segments(cls, segments: Sequence[Segment], kinds: Sequence[VertexKind]) -> "Component":
        n = len(segments)
        vertices = []
        for i, kind in enumerate(kinds):
            j = (i + 1) % n
            a, b = np.array(segments[i].end), np.array(segments[j].start)
            vertices.append(Vertex(VertexKind(kind), _as_point((a + b) / 2.0), i, j))
        return cls(tuple(segments), tuple(vertices))


@dataclass(frozen=True)
class Graphic:
    components: Tuple[Component, ...]
    crossings: Optional[Tuple[CrossingTag, ...]] = field(default=None)

    def segments(self) -> Iterator[Tuple[SegmentRef, Segment]]:
        for ci, component in enumerate(self.components):
            for si, segment in enumerate(component.segments):
                yield SegmentRef(ci, si), segment

    def segment(self, ref: SegmentRef) -> Segment:
        return self.components[ref.component].segments[ref.segment]

    def vertices(self) -> Iterator[Tuple[int, Vertex]]:
        for ci, component in enumerate(self.components):
            for vertex in component.vertices:
                yield ci, vertex

    def cusps(self) -> List[Tuple[int, Vertex]]:
        return [(ci, v) for ci, v in self.vertices() if v.kind is VertexKind.CUSP]

    @cached_property
    def scale(self) -> float:
        """Bounding-box diagonal, the length unit for relative tolerances."""
        pts = np.array([p for _, seg in self.segments() for p in seg.control])
        if len(pts) == 0:
            return 1.0
        span = np.ptp(pts, axis=0)
        return float(max(np.hypot(*span), 1e-300))

    def transformed(self, matrix: np.ndarray, offset: Sequence[float] = (0.0, 0.0)) -> "Graphic":
        matrix = np.asarray(matrix, dtype=float)
        components = []
        for component in self.components:
            segments = [seg.transformed(matrix, offset) for seg in component.segments]
            components.append(Component.from_segments(segments, [v.kind for v in component.vertices]))
        return Graphic(tuple(components), self.crossings)

    def rotated(self, theta: float) -> "Graphic":
        return self.transformed(_rotation(theta))

    def scaled(self, factor: float) -> "Graphic":
        return self.transformed(np.eye(2) * factor)

    def translated(self, offset: Sequence[float]) -> "Graphic":
        return self.transformed(np.eye(2), offset)

    def merged(self, other: "Graphic") -> "Graphic":
        crossings = None
        if self.crossings is not None or other.crossings is not None:
            crossings = tuple(self.crossings or ()) + tuple(other.crossings or ())
        return Graphic(self.components + other.components, crossings)


@dataclass(frozen=True)
class GraphicTransform:
    """Similarity x -> scale * R(rotation) x + offset."""

    rotation: float = 0.0
    scale: float = 1.0
    offset: Point = (0.0, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        return self.scale * _rotation(self.rotation)

    def apply(self, g: Graphic) -> Graphic:
        return g.transformed(self.matrix, self.offset)

    def then(self, other: "GraphicTransform") -> "GraphicTransform":
        offset = other.matrix @ np.asarray(self.offset) + np.asarray(other.offset)
        return GraphicTransform(self.rotation + other.rotation, self.scale * other.scale, _as_point(offset))


def rotate_point(p: Sequence[float], t: float) -> np.ndarray:
    return _rotation(t) @ np.asarray(p, dtype=float)


def slope_of(direction: Sequence[float]) -> Optional[float]:
    """Unoriented slope dy/dx, None when vertical within tol_angle."""
    dx, dy = float(direction[0]), float(direction[1])
    norm = math.hypot(dx, dy)
    if abs(dx) <= CONFIG.tol_angle * norm:
        return None
    return dy / dx


def attributed(values: Sequence[float]) -> List[float]:
    """Keep parameters in the half-open attribution interval [-eta, 1 - eta)."""
    eta = CONFIG.attribution_margin
    return [v for v in values if -eta <= v < 1.0 - eta]


def inflections(seg: Segment) -> List[Inflection]:
    """Interior roots of the signed-curvature numerator with their tangent slope."""
    eta = CONFIG.attribution_margin
    if seg.is_flat:
        raise DegenerateFlat(f"Segment {seg.control} is straight")
    try:
        roots = real_roots(seg.curvature_numerator, (0.0, 1.0))
    except IdenticallyZero as exc:
        raise DegenerateFlat(f"Segment {seg.control} is straight") from exc
    found = []
    for root in roots:
        if not eta < root.value < 1.0 - eta:
            continue
        direction = seg.unit_tangent(root.value)
        found.append(Inflection(
            s=root.value,
            point=_as_point(seg.point(root.value)),
            slope=slope_of(direction),
            direction=_as_point(direction),
        ))
    return found


def tangencies(seg: Segment, t: float) -> List[float]:
    """Parameters where the tangent is horizontal after rotating by t."""
    eta = CONFIG.attribution_margin
    if seg.is_flat:
        raise DegenerateFlat(f"Segment {seg.control} is straight")
    try:
        roots = real_roots(seg.height_derivative(t), (-eta, 1.0))
    except IdenticallyZero as exc:
        raise DegenerateFlat(f"Segment {seg.control} is straight") from exc
    params = []
    for root in roots:
        if not -eta <= root.value < 1.0 - eta:
            continue
        if root.multiplicity >= 2:
            raise TangentialDegeneracy(
                f"Tangency of multiplicity {root.multiplicity} at s={root.value:.12g}, t={t:.12g}"
            )
        params.append(root.value)
    return params
