"""Axiom validation, crossing detection and cusp classification for graphics."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import fsolve

from models.errors import DegenerateFlat, UndecidableAtTolerance
from models.graphic import (
    CuspType,
    FoldType,
    Graphic,
    Segment,
    SegmentRef,
    Vertex,
    VertexKind,
    inflections,
    slope_of,
)
from utils.roots import real_roots

from .config_service import CONFIG

LOGGER = logging.getLogger(__name__)

# Pieces smaller than this fraction of the graphic scale are handed to Newton.
_LEAF_FRACTION = 1e-3
_MAX_DEPTH = 32
# Intersections closer than this fraction of the scale to a shared vertex belong to the vertex.
_VERTEX_RADIUS = 1e-4


class ViolationCode(str, Enum):
    FOLD_ALTERNATION = "FoldAlternation"
    TANGENT_MISMATCH = "TangentMismatch"
    DEGENERATE_FLAT = "DegenerateFlat"
    VANISHING_VELOCITY = "VanishingVelocity"
    NON_TRANSVERSAL_CROSSING = "NonTransversalCrossing"
    CUSP_ON_CROSSING = "CuspOnCrossing"
    SHEET_MISMATCH = "SheetMismatch"
    UNDECIDABLE_CUSP = "UndecidableAtTolerance"
    ENDPOINT_EVENT = "EndpointEvent"
    CROSSING_COUNT_MISMATCH = "CrossingCountMismatch"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    location: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {"code": self.code.value, "location": self.location, "message": self.message}


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def codes(self) -> List[str]:
        return [v.code.value for v in self.violations]

    def add(self, code: ViolationCode, location: str, message: str) -> None:
        self.violations.append(Violation(code, location, message))

    def to_dict(self) -> Dict:
        return {"passed": self.passed, "violations": [v.to_dict() for v in self.violations]}


class Crossing(NamedTuple):
    first: SegmentRef
    second: SegmentRef
    s: float
    u: float
    point: Tuple[float, float]
    sin_angle: float


class CuspGerm(NamedTuple):
    """Tangent-line frame at a cusp and the signed offsets of both edge germs."""

    normal: np.ndarray
    incoming_offset: float
    outgoing_offset: float
    tolerance: float


def vertex_label(component: int, vertex: Vertex) -> str:
    return f"c{component}v{vertex.incoming}"


def cusp_germ(g: Graphic, component: int, vertex: Vertex) -> CuspGerm:
    segments = g.components[component].segments
    incoming, outgoing = segments[vertex.incoming], segments[vertex.outgoing]
    eps = CONFIG.cusp_offset
    position = np.array(vertex.position)
    tangent = incoming.unit_tangent(1.0)
    normal = np.array([-tangent[1], tangent[0]])
    d_in = float(normal @ (incoming.point(1.0 - eps) - position))
    d_out = float(normal @ (outgoing.point(eps) - position))
    tolerance = CONFIG.tol_side * max(incoming.chord, outgoing.chord, incoming.hull_size, outgoing.hull_size)
    return CuspGerm(normal, d_in, d_out, tolerance)


def classify_cusp(g: Graphic, component: int, vertex: Vertex) -> CuspType:
    """
    Decide whether the tangent line at a cusp separates its two edges.

    Raises:
        UndecidableAtTolerance: one germ lies within tol_side of the tangent line
    """
    if vertex.kind is not VertexKind.CUSP:
        raise ValueError(f"Vertex {vertex_label(component, vertex)} is not a cusp")
    germ = cusp_germ(g, component, vertex)
    if abs(germ.incoming_offset) <= germ.tolerance or abs(germ.outgoing_offset) <= germ.tolerance:
        raise UndecidableAtTolerance(
            f"Cusp {vertex_label(component, vertex)}: germ offsets "
            f"{germ.incoming_offset:.3g}, {germ.outgoing_offset:.3g} within {germ.tolerance:.3g}"
        )
    if np.sign(germ.incoming_offset) != np.sign(germ.outgoing_offset):
        return CuspType.TYPE_ONE
    return CuspType.TYPE_TWO


def _hull_bounds(seg: Segment) -> Tuple[np.ndarray, np.ndarray]:
    pts = np.array(seg.control)
    return pts.min(axis=0), pts.max(axis=0)


def _boxes_overlap(a: Segment, b: Segment, pad: float) -> bool:
    lo_a, hi_a = _hull_bounds(a)
    lo_b, hi_b = _hull_bounds(b)
    return bool(np.all(lo_a <= hi_b + pad) and np.all(lo_b <= hi_a + pad))


def _candidate_pairs(a: Segment, b: Segment, ra, rb, leaf: float, depth: int, found: List[Tuple[float, float]]):
    if not _boxes_overlap(a, b, leaf * 1e-3):
        return
    if depth >= _MAX_DEPTH or (a.hull_size < leaf and b.hull_size < leaf):
        found.append((0.5 * (ra[0] + ra[1]), 0.5 * (rb[0] + rb[1])))
        return
    a1, a2 = a.subdivide(0.5)
    b1, b2 = b.subdivide(0.5)
    ma, mb = 0.5 * (ra[0] + ra[1]), 0.5 * (rb[0] + rb[1])
    for pa, sub_ra in ((a1, (ra[0], ma)), (a2, (ma, ra[1]))):
        for pb, sub_rb in ((b1, (rb[0], mb)), (b2, (mb, rb[1]))):
            _candidate_pairs(pa, pb, sub_ra, sub_rb, leaf, depth + 1, found)


def _polish(a: Segment, b: Segment, s0: float, u0: float) -> Optional[Tuple[float, float]]:
    def residual(x):
        return a.point(x[0]) - b.point(x[1])

    def jacobian(x):
        return np.column_stack([a.velocity(x[0]), -b.velocity(x[1])])

    solution, _, status, _ = fsolve(residual, [s0, u0], fprime=jacobian, full_output=True, xtol=1e-14)
    if status != 1:
        return None
    return float(solution[0]), float(solution[1])


def _shared_vertices(g: Graphic, ra: SegmentRef, rb: SegmentRef) -> List[np.ndarray]:
    if ra.component != rb.component:
        return []
    component = g.components[ra.component]
    shared = []
    for vertex in component.vertices:
        if {vertex.incoming, vertex.outgoing} == {ra.segment, rb.segment}:
            shared.append(np.array(vertex.position))
    return shared


def find_crossings(g: Graphic) -> List[Crossing]:
    """Double points between distinct segments, excluding the vertices they share."""
    scale = g.scale
    leaf = _LEAF_FRACTION * scale
    tol = 1e3 * CONFIG.tol_geom * scale
    refs = list(g.segments())
    crossings: List[Crossing] = []
    for i, (ra, a) in enumerate(refs):
        for rb, b in refs[i + 1:]:
            shared = _shared_vertices(g, ra, rb)
            candidates: List[Tuple[float, float]] = []
            _candidate_pairs(a, b, (0.0, 1.0), (0.0, 1.0), leaf, 0, candidates)
            accepted: List[Crossing] = []
            for s0, u0 in candidates:
                polished = _polish(a, b, s0, u0)
                if polished is None:
                    continue
                s, u = polished
                if not (-1e-9 <= s <= 1.0 + 1e-9 and -1e-9 <= u <= 1.0 + 1e-9):
                    continue
                point = a.point(s)
                if np.linalg.norm(point - b.point(u)) > tol:
                    continue
                if any(np.linalg.norm(point - v) <= _VERTEX_RADIUS * scale for v in shared):
                    continue
                if any(abs(s - c.s) <= 1e-7 and abs(u - c.u) <= 1e-7 for c in accepted):
                    continue
                ta, tb = a.unit_tangent(s), b.unit_tangent(u)
                sin_angle = abs(float(ta[0] * tb[1] - ta[1] * tb[0]))
                accepted.append(Crossing(ra, rb, s, u, (float(point[0]), float(point[1])), sin_angle))
            crossings.extend(accepted)
    crossings.sort(key=lambda c: (c.first, c.second, c.s))
    return crossings


def _min_speed(seg: Segment) -> float:
    dx, dy = seg.first_derivative
    speed2 = dx * dx + dy * dy
    knots = [0.0, 1.0]
    if not speed2.deriv().is_zero:
        knots += [r.value for r in real_roots(speed2.deriv(), (0.0, 1.0))]
    return math.sqrt(max(0.0, min(float(speed2(k)) for k in knots)))


class ValidationService:
    def __init__(self, graphic: Graphic):
        self.graphic = graphic

    def validate(self) -> ValidationReport:
        report = ValidationReport()
        self._check_segments(report)
        self._check_vertices(report)
        self._check_crossings(report)
        LOGGER.info("Validation finished with %d violation(s)", len(report.violations))
        return report

    def _check_segments(self, report: ValidationReport) -> None:
        for ref, seg in self.graphic.segments():
            if seg.is_flat:
                report.add(ViolationCode.DEGENERATE_FLAT, str(ref), "segment is a straight line")
                continue
            if _min_speed(seg) <= CONFIG.tol_geom * max(seg.hull_size, 1e-300):
                report.add(ViolationCode.VANISHING_VELOCITY, str(ref), "velocity vanishes on the segment")
                continue
            for point in inflections(seg):
                if point.slope is None or abs(point.slope) <= CONFIG.tol_angle:
                    report.add(
                        ViolationCode.ENDPOINT_EVENT, str(ref),
                        f"inflection at s={point.s:.6g} has a horizontal or vertical tangent",
                    )

    def _check_vertices(self, report: ValidationReport) -> None:
        g = self.graphic
        for ci, vertex in g.vertices():
            segments = g.components[ci].segments
            incoming, outgoing = segments[vertex.incoming], segments[vertex.outgoing]
            label = vertex_label(ci, vertex)
            if incoming.is_flat or outgoing.is_flat:
                continue
            dot = float(incoming.unit_tangent(1.0) @ outgoing.unit_tangent(0.0))
            if vertex.kind is VertexKind.SMOOTH:
                if dot <= 1.0 - CONFIG.tol_angle:
                    report.add(ViolationCode.TANGENT_MISMATCH, label, f"smooth vertex tangents differ (dot={dot:.12g})")
                if incoming.fold is not outgoing.fold:
                    report.add(ViolationCode.FOLD_ALTERNATION, label, "fold type changes at a smooth vertex")
                elif incoming.sheet is not outgoing.sheet:
                    report.add(ViolationCode.SHEET_MISMATCH, label, "sheet side flips at a smooth vertex")
                continue

            if dot >= -1.0 + CONFIG.tol_angle:
                report.add(ViolationCode.TANGENT_MISMATCH, label, f"cusp tangents are not anti-parallel (dot={dot:.12g})")
                continue
            if incoming.fold is outgoing.fold:
                report.add(ViolationCode.FOLD_ALTERNATION, label, f"cusp joins two {incoming.fold.value} edges")
            slope = slope_of(incoming.unit_tangent(1.0))
            if slope is None or abs(slope) <= CONFIG.tol_angle:
                report.add(ViolationCode.ENDPOINT_EVENT, label, "cusp tangent is horizontal or vertical")
            try:
                classify_cusp(g, ci, vertex)
            except UndecidableAtTolerance as exc:
                LOGGER.warning("%s", exc)
                report.add(ViolationCode.UNDECIDABLE_CUSP, label, str(exc))
                continue
            if incoming.fold is not outgoing.fold:
                mismatch = self._sheet_mismatch(ci, vertex)
                if mismatch:
                    report.add(ViolationCode.SHEET_MISMATCH, label, mismatch)

    def _sheet_mismatch(self, component: int, vertex: Vertex) -> Optional[str]:
        segments = self.graphic.components[component].segments
        germ = cusp_germ(self.graphic, component, vertex)
        incoming, outgoing = segments[vertex.incoming], segments[vertex.outgoing]
        if incoming.fold is FoldType.DEFINITE:
            definite, s, offset = incoming, 1.0, germ.incoming_offset
            indefinite, u = outgoing, 0.0
        else:
            definite, s, offset = outgoing, 0.0, germ.outgoing_offset
            indefinite, u = incoming, 1.0
        definite_side = np.sign(float(germ.normal @ definite.sheet_normal(s)))
        if definite_side != -np.sign(offset):
            return "definite sheet side points away from the cusp tangent line"
        if np.sign(float(germ.normal @ indefinite.sheet_normal(u))) != definite_side:
            return "definite and indefinite sheet sides lie on opposite sides of the cusp tangent line"
        return None

    def _check_crossings(self, report: ValidationReport) -> None:
        g = self.graphic
        try:
            crossings = find_crossings(g)
        except DegenerateFlat:
            return
        threshold = math.sqrt(CONFIG.tol_angle)
        cusp_positions = [(vertex_label(ci, v), np.array(v.position)) for ci, v in g.cusps()]
        for crossing in crossings:
            label = f"{crossing.first}x{crossing.second}"
            if crossing.sin_angle <= threshold:
                report.add(
                    ViolationCode.NON_TRANSVERSAL_CROSSING, label,
                    f"segments meet tangentially at {crossing.point}",
                )
            for cusp_label, position in cusp_positions:
                if np.linalg.norm(np.array(crossing.point) - position) <= _VERTEX_RADIUS * g.scale:
                    report.add(ViolationCode.CUSP_ON_CROSSING, cusp_label, f"cusp lies on the crossing {label}")
        if g.crossings is not None and len(g.crossings) != len(crossings):
            report.add(
                ViolationCode.CROSSING_COUNT_MISMATCH, "graphic",
                f"file lists {len(g.crossings)} crossing(s), geometry has {len(crossings)}",
            )


def validate(g: Graphic) -> ValidationReport:
    return ValidationService(g).validate()
