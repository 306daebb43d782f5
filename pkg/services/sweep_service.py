"""
Rotation sweep over a graphic.

Rotating the graphic counterclockwise by t and reading off heights gives the
function cos(t) g + sin(t) f. Its critical points are the horizontal
tangencies of the rotated fold edges; it fails to be Morse exactly at the
event angles (horizontal inflections, horizontal cusps, doubly tangent
lines). Between events the census of tangency indices fixes the genus of
the induced Heegaard splitting.
"""
from __future__ import annotations

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, fsolve

from models.errors import (
    ClassificationMismatch,
    EventAngle,
    GenericityFailure,
    GenericityWarning,
    NegativeGenus,
    PeakExceedsBound,
    TangentialDegeneracy,
)
from models.graphic import (
    CuspType,
    FoldType,
    Graphic,
    Segment,
    SegmentRef,
    SheetSide,
    inflections,
    slope_of,
    tangencies,
)
from utils.roots import real_polyroots

from .config_service import CONFIG
from .stabilization_service import StableGenusReport, common_stab_genus, stable_genus_report
from .validation_service import classify_cusp, vertex_label

LOGGER = logging.getLogger(__name__)

HALF_PI = math.pi / 2.0

# Parameter range scanned for bitangent tangency points, slightly past the segment ends.
_SCAN_RANGE = (-0.05, 1.05)
# Points closer than this fraction of the scale are one point.
_COINCIDENT = 1e-6
# Tangent pairs this close (relative to the hull size) to an inflection are its own tangent line.
_INFLECTION_RADIUS = 1e-3
# Events closer than this many min_delta widths are classified as one group.
_GROUP_WIDTHS = 2.0


class EventKind(str, Enum):
    DEFINITE_INFLECTION = "DefiniteInflection"
    INDEFINITE_INFLECTION = "IndefiniteInflection"
    CUSP_TYPE_ONE = "CuspTypeOne"
    CUSP_TYPE_TWO = "CuspTypeTwo"
    DOUBLE_TANGENCY = "DoubleTangency"


ZERO_DELTA_KINDS = frozenset({
    EventKind.DEFINITE_INFLECTION,
    EventKind.CUSP_TYPE_ONE,
    EventKind.DOUBLE_TANGENCY,
})


class EventCandidate(NamedTuple):
    angle: float
    kind: EventKind
    location: str


@dataclass(frozen=True)
class Event:
    angle: float
    kind: EventKind
    location: str
    genus_delta: int

    def to_dict(self, digits: int) -> Dict:
        return {
            "angle": float(f"{self.angle:.{digits}g}"),
            "kind": self.kind.value,
            "location": self.location,
            "genus_delta": self.genus_delta,
        }


@dataclass(frozen=True)
class CriticalCensus:
    n0: int = 0
    n1: int = 0
    n2: int = 0
    n3: int = 0

    @property
    def euler(self) -> int:
        return self.n0 - self.n1 + self.n2 - self.n3

    @property
    def total(self) -> int:
        return self.n0 + self.n1 + self.n2 + self.n3

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return self.n0, self.n1, self.n2, self.n3


@dataclass(frozen=True)
class CriticalPoint:
    ref: SegmentRef
    s: float
    point: Tuple[float, float]
    height: float
    index: int
    fold: FoldType


@dataclass(frozen=True)
class LevelSets:
    """Critical heights grouped by Morse index at one angle."""

    heights: Dict[int, Tuple[float, ...]]
    separating_level: Optional[float]
    genus: int

    @property
    def ordered(self) -> bool:
        return self.separating_level is not None


@dataclass(frozen=True)
class DoubleTangent:
    angle: float
    slope: float
    first: Tuple[SegmentRef, float]
    second: Tuple[SegmentRef, float]
    points: Tuple[Tuple[float, float], Tuple[float, float]]

    @property
    def location(self) -> str:
        (ra, s), (rb, u) = self.first, self.second
        return f"{ra}@{s:.6f}|{rb}@{u:.6f}"


@dataclass(frozen=True)
class Trajectory:
    breakpoints: Tuple[float, ...]
    genera: Tuple[int, ...]
    censuses: Tuple[CriticalCensus, ...] = field(default=())
    samples: Tuple[float, ...] = field(default=())

    @property
    def q(self) -> int:
        return self.genera[0]

    @property
    def p(self) -> int:
        return self.genera[-1]

    @property
    def peak(self) -> int:
        return max(self.genera)

    @property
    def steps(self) -> List[int]:
        return [b - a for a, b in zip(self.genera[:-1], self.genera[1:])]

    @property
    def midpoints(self) -> List[float]:
        if self.samples:
            return list(self.samples)
        edges = [0.0, *self.breakpoints, HALF_PI]
        return [0.5 * (a + b) for a, b in zip(edges[:-1], edges[1:])]


def _index(seg: Segment, s: float, t: float) -> int:
    """Morse index of the tangency at parameter s of seg, after rotating by t."""
    vx, vy = seg.velocity(s)
    rotated_vx = vx * math.cos(t) - vy * math.sin(t)
    above = (rotated_vx > 0) == (seg.sheet is SheetSide.LEFT)
    is_min = float(seg.height_second_derivative(t)(s)) > 0
    if seg.fold is FoldType.INDEFINITE:
        return 1 if is_min else 2
    if above:
        return 0 if is_min else 1
    return 2 if is_min else 3


def _parallel_roots(direction: np.ndarray, seg: Segment) -> List[float]:
    dx, dy = seg.first_derivative
    bx = list(dx.coefficients) + [0.0] * (3 - len(dx.coefficients))
    by = list(dy.coefficients) + [0.0] * (3 - len(dy.coefficients))
    coefficients = [direction[0] * cy - direction[1] * cx for cx, cy in zip(bx, by)]
    return real_polyroots(coefficients, *_SCAN_RANGE)


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


class SweepService:
    """All sweep queries over one immutable graphic, with cached event data."""

    def __init__(self, graphic: Graphic, workers: Optional[int] = None):
        self.graphic = graphic
        self.workers = workers or CONFIG.workers

    # Census

    def critical_points(self, t: float) -> List[CriticalPoint]:
        """
        Every horizontal tangency after rotating by t, with its Morse index.

        Raises:
            EventAngle: t is (numerically) an event angle
        """
        points: List[CriticalPoint] = []
        for ref, seg in self.graphic.segments():
            try:
                params = tangencies(seg, t)
            except TangentialDegeneracy as exc:
                raise EventAngle(f"t={t:.12g} is an event angle: {exc}") from exc
            for s in params:
                index = _index(seg, s, t)
                x, y = seg.point(s)
                height = x * math.sin(t) + y * math.cos(t)
                points.append(CriticalPoint(ref, s, (float(x), float(y)), float(height), index, seg.fold))

        heights = sorted(p.height for p in points)
        # Tangencies born at an inflection differ in height by about delta**1.5 at angle offset delta.
        tie = CONFIG.tol_root * self.graphic.scale
        for lower, upper in zip(heights[:-1], heights[1:]):
            if upper - lower <= tie:
                raise EventAngle(f"t={t:.12g}: two tangencies share the height {lower:.12g}")
        return points

    def critical_census(self, t: float) -> CriticalCensus:
        counts = [0, 0, 0, 0]
        for point in self.critical_points(t):
            counts[point.index] += 1
        return CriticalCensus(*counts)

    def genus_at(self, t: float) -> int:
        census = self.critical_census(t)
        genus = census.n1 - census.n0 + 1
        if genus < 0:
            raise NegativeGenus(f"Census {census.as_tuple()} at t={t:.12g} gives genus {genus}")
        return genus

    def level_sets(self, t: float) -> LevelSets:
        points = self.critical_points(t)
        heights = {i: tuple(sorted(p.height for p in points if p.index == i)) for i in range(4)}
        low = heights[0] + heights[1]
        high = heights[2] + heights[3]
        separating = None
        if low and high and max(low) < min(high):
            separating = 0.5 * (max(low) + min(high))
        return LevelSets(heights, separating, len(heights[1]) - len(heights[0]) + 1)

    # Events

    @cached_property
    def _local_candidates(self) -> List[Tuple[EventCandidate, float]]:
        """Inflection and cusp candidates paired with their tangent slope (None when vertical)."""
        found: List[Tuple[EventCandidate, float]] = []
        for ref, seg in self.graphic.segments():
            kind = (
                EventKind.DEFINITE_INFLECTION if seg.fold is FoldType.DEFINITE
                else EventKind.INDEFINITE_INFLECTION
            )
            for point in inflections(seg):
                angle = math.atan(-point.slope) if point.slope is not None else HALF_PI
                found.append((EventCandidate(angle, kind, f"{ref}@{point.s:.6f}"), point.slope))
        for ci, vertex in self.graphic.cusps():
            incoming = self.graphic.components[ci].segments[vertex.incoming]
            slope = slope_of(incoming.unit_tangent(1.0))
            cusp_type = classify_cusp(self.graphic, ci, vertex)
            kind = EventKind.CUSP_TYPE_ONE if cusp_type is CuspType.TYPE_ONE else EventKind.CUSP_TYPE_TWO
            angle = math.atan(-slope) if slope is not None else HALF_PI
            found.append((EventCandidate(angle, kind, vertex_label(ci, vertex)), slope))
        return found

    def _scan_pair(self, ra: SegmentRef, a: Segment, rb: SegmentRef, b: Segment) -> List[DoubleTangent]:
        """Lines tangent to a at s and to b at u, from sign changes of the chord cross product."""
        scale = self.graphic.scale
        same = ra == rb
        samples = np.linspace(*_SCAN_RANGE, CONFIG.bitangent_samples)
        flat_tol = 1e-3 * CONFIG.tol_geom * scale ** 2

        shared = self._shared_vertices(ra, rb)
        near = 0.1 * max(a.hull_size, b.hull_size)
        bends = [np.array(p.point) for p in inflections(a) + ([] if same else inflections(b))]
        bend_radius = _INFLECTION_RADIUS * max(a.hull_size, b.hull_size)

        def at_bend(pa: np.ndarray, pb: np.ndarray) -> bool:
            return any(
                np.linalg.norm(pa - q) <= bend_radius and np.linalg.norm(pb - q) <= bend_radius for q in bends
            )

        def branches(s: float) -> List[Tuple[float, float, bool]]:
            """(u, chord cross product, counts toward a continuum) per parallel-tangent root."""
            direction = a.velocity(s)
            pa = a.point(s)
            rows = []
            for u in _parallel_roots(direction, b):
                if same and abs(u - s) <= 1e-6:
                    continue
                pb = b.point(u)
                g = _cross(direction, pb - pa)
                excluded = any(np.linalg.norm(pa - v) <= near for v in shared) or at_bend(pa, pb)
                rows.append((u, g, abs(g) <= flat_tol and not excluded))
            return rows

        rows = [branches(s) for s in samples]
        run = 0
        for i, row in enumerate(rows):
            run = run + 1 if any(flat for _, _, flat in row) else 0
            if run >= 3:
                raise GenericityFailure(
                    f"Continuum of doubly tangent lines between {ra} and {rb} near s={samples[i]:.4f}"
                )

        brackets: List[Tuple[float, float, float, float]] = []
        for i in range(len(samples) - 1):
            for u0, g0, _ in rows[i]:
                match = min(rows[i + 1], key=lambda r: abs(r[0] - u0), default=None)
                if match is None or abs(match[0] - u0) > 0.05:
                    continue
                u1, g1, _ = match
                if g0 == 0.0 or g0 * g1 < 0:
                    brackets.append((samples[i], samples[i + 1], u0, u1))

        found: List[DoubleTangent] = []
        for s_lo, s_hi, u_lo, u_hi in brackets:
            tangent = self._refine(a, b, same, s_lo, s_hi, u_lo, u_hi)
            if tangent is None:
                continue
            s, u = tangent
            if not (-1e-6 <= s <= 1.0 + 1e-6 and -1e-6 <= u <= 1.0 + 1e-6):
                continue
            pa, pb = a.point(s), b.point(u)
            if np.linalg.norm(pa - pb) <= _COINCIDENT * scale or at_bend(pa, pb):
                continue
            slope = slope_of(a.velocity(s))
            if slope is None or abs(slope) <= CONFIG.tol_angle:
                raise GenericityFailure(f"Doubly tangent line of {ra} and {rb} is horizontal or vertical")
            found.append(DoubleTangent(
                angle=math.atan(-slope),
                slope=slope,
                first=(ra, s),
                second=(rb, u),
                points=((float(pa[0]), float(pa[1])), (float(pb[0]), float(pb[1]))),
            ))
        return found

    def _shared_vertices(self, ra: SegmentRef, rb: SegmentRef) -> List[np.ndarray]:
        if ra.component != rb.component:
            return []
        segments = {ra.segment, rb.segment}
        return [
            np.array(v.position)
            for v in self.graphic.components[ra.component].vertices
            if segments <= {v.incoming, v.outgoing}
        ]

    @staticmethod
    def _refine(a: Segment, b: Segment, same: bool, s_lo, s_hi, u_lo, u_hi) -> Optional[Tuple[float, float]]:
        def nearest_u(s: float) -> Optional[float]:
            guess = u_lo + (u_hi - u_lo) * (s - s_lo) / (s_hi - s_lo)
            roots = [u for u in _parallel_roots(a.velocity(s), b) if not (same and abs(u - s) <= 1e-6)]
            return min(roots, key=lambda u: abs(u - guess), default=None)

        def chord_cross(s: float) -> float:
            u = nearest_u(s)
            if u is None:
                return float("nan")
            return _cross(a.velocity(s), b.point(u) - a.point(s))

        g_lo, g_hi = chord_cross(s_lo), chord_cross(s_hi)
        if not (np.isfinite(g_lo) and np.isfinite(g_hi)):
            return None
        if g_lo == 0.0:
            s0 = s_lo
        elif g_hi == 0.0:
            s0 = s_hi
        elif g_lo * g_hi < 0:
            try:
                s0 = brentq(chord_cross, s_lo, s_hi, xtol=CONFIG.tol_root)
            except (ValueError, RuntimeError):
                return None
        else:
            return None
        u0 = nearest_u(s0)
        if u0 is None:
            return None

        def system(x):
            da = a.velocity(x[0])
            return [_cross(da, b.velocity(x[1])), _cross(da, b.point(x[1]) - a.point(x[0]))]

        solution, _, status, _ = fsolve(system, [s0, u0], full_output=True, xtol=1e-14)
        s, u = (float(solution[0]), float(solution[1])) if status == 1 else (s0, u0)
        da, db = a.velocity(s), b.velocity(u)
        size = float(np.linalg.norm(da))
        if abs(_cross(da, db)) > 1e-8 * size * float(np.linalg.norm(db)):
            return None
        if abs(_cross(da, b.point(u) - a.point(s))) > 1e-8 * size * max(a.hull_size, b.hull_size):
            return None
        return s, u

    @cached_property
    def _double_tangents(self) -> List[DoubleTangent]:
        refs = list(self.graphic.segments())
        pairs = [(ra, a, rb, b) for i, (ra, a) in enumerate(refs) for rb, b in refs[i:]]
        if self.workers > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda pair: self._scan_pair(*pair), pairs))
        else:
            results = [self._scan_pair(*pair) for pair in pairs]

        scale = self.graphic.scale
        unique: List[DoubleTangent] = []
        for tangent in (t for batch in results for t in batch):
            pa, pb = (np.array(p) for p in tangent.points)
            duplicate = False
            for kept in unique:
                qa, qb = (np.array(p) for p in kept.points)
                same_points = (
                    (np.linalg.norm(pa - qa) <= _COINCIDENT * scale and np.linalg.norm(pb - qb) <= _COINCIDENT * scale)
                    or (np.linalg.norm(pa - qb) <= _COINCIDENT * scale and np.linalg.norm(pb - qa) <= _COINCIDENT * scale)
                )
                if same_points and abs(kept.angle - tangent.angle) <= CONFIG.tol_event:
                    duplicate = True
                    break
            if not duplicate:
                unique.append(tangent)
        unique.sort(key=lambda d: (d.angle, d.location))
        return unique

    def doubly_tangent_lines(self) -> List[DoubleTangent]:
        """Negative-slope lines tangent to the graphic at two distinct points."""
        return [d for d in self._double_tangents if d.slope < 0]

    def event_candidates(self) -> List[EventCandidate]:
        candidates = []
        for candidate, slope in self._local_candidates:
            if slope is None or abs(slope) <= CONFIG.tol_angle:
                raise GenericityFailure(
                    f"{candidate.kind.value} at {candidate.location} has a horizontal or vertical tangent"
                )
            if slope < 0:
                candidates.append(candidate)
        for tangent in self.doubly_tangent_lines():
            candidates.append(EventCandidate(tangent.angle, EventKind.DOUBLE_TANGENCY, tangent.location))
        candidates.sort(key=lambda c: (c.angle, c.location))
        return candidates

    def _delta(self, spans: Sequence[Tuple[float, float]], i: int) -> float:
        first, last = spans[i]
        gaps = [first, HALF_PI - last]
        if i > 0:
            gaps.append(first - spans[i - 1][1])
        if i + 1 < len(spans):
            gaps.append(spans[i + 1][0] - last)
        return max(0.5 * min(gaps), CONFIG.min_delta)

    def classify_event(self, candidate: EventCandidate, delta: float) -> Event:
        before = self.genus_at(candidate.angle - delta)
        after = self.genus_at(candidate.angle + delta)
        genus_delta = after - before
        expected_zero = candidate.kind in ZERO_DELTA_KINDS
        if (expected_zero and genus_delta != 0) or (not expected_zero and abs(genus_delta) != 1):
            raise ClassificationMismatch(
                f"{candidate.kind.value} at {candidate.location} (t={candidate.angle:.12g}) "
                f"changes the genus by {genus_delta}"
            )
        return Event(candidate.angle, candidate.kind, candidate.location, genus_delta)

    def classify_group(self, group: Sequence[EventCandidate], delta: float) -> List[Event]:
        """
        Classify events too close to separate with one genus difference across the whole group.

        Only the net change is observable; it is spread over the genus-changing
        members in angle order, rises first.
        """
        if len(group) == 1:
            return [self.classify_event(group[0], delta)]
        net = self.genus_at(group[-1].angle + delta) - self.genus_at(group[0].angle - delta)
        changing = sum(1 for c in group if c.kind not in ZERO_DELTA_KINDS)
        if abs(net) > changing or (changing - net) % 2:
            raise ClassificationMismatch(
                f"{len(group)} events near t={group[0].angle:.12g} change the genus by {net}, "
                f"{changing} of them can change it"
            )
        rises = (changing + net) // 2
        signs = iter([1] * rises + [-1] * (changing - rises))
        return [
            Event(c.angle, c.kind, c.location, 0 if c.kind in ZERO_DELTA_KINDS else next(signs))
            for c in group
        ]

    @cached_property
    def _event_groups(self) -> List[List[Event]]:
        window = max(CONFIG.tol_event, _GROUP_WIDTHS * CONFIG.min_delta)
        groups: List[List[EventCandidate]] = []
        for candidate in self.event_candidates():
            if groups and candidate.angle - groups[-1][-1].angle <= window:
                groups[-1].append(candidate)
            else:
                groups.append([candidate])
        for group in groups:
            if len(group) > 1:
                message = (
                    f"Events {', '.join(c.location for c in group)} coincide near the angle {group[0].angle:.12g}"
                )
                LOGGER.warning(message)
                warnings.warn(message, GenericityWarning, stacklevel=4)
        spans = [(g[0].angle, g[-1].angle) for g in groups]
        classified = [self.classify_group(g, self._delta(spans, i)) for i, g in enumerate(groups)]
        LOGGER.info("Event schedule: %d event(s) in %d group(s)", sum(map(len, classified)), len(classified))
        return classified

    @property
    def _events(self) -> List[Event]:
        return [event for group in self._event_groups for event in group]

    def event_schedule(self) -> List[Event]:
        return self._events

    # Trajectory and bounds

    @cached_property
    def _trajectory(self) -> Trajectory:
        groups = self._event_groups
        edges = [0.0, *(x for g in groups for x in (g[0].angle, g[-1].angle)), HALF_PI]
        samples = tuple(0.5 * (a + b) for a, b in zip(edges[0::2], edges[1::2]))
        censuses = tuple(self.critical_census(t) for t in samples)
        genera = []
        for t, census in zip(samples, censuses):
            genus = census.n1 - census.n0 + 1
            if genus < 0:
                raise NegativeGenus(f"Census {census.as_tuple()} at t={t:.12g} gives genus {genus}")
            genera.append(genus)
        breakpoints = tuple(g[0].angle for g in groups)
        trajectory = Trajectory(breakpoints, tuple(genera), censuses, samples)
        for group, step in zip(groups, trajectory.steps):
            if step != sum(e.genus_delta for e in group):
                raise ClassificationMismatch(
                    f"Trajectory step {step} at t={group[0].angle:.12g} disagrees with {group[0].kind.value}"
                )
        LOGGER.info("Genus trajectory %s", list(trajectory.genera))
        return trajectory

    def genus_trajectory(self) -> Trajectory:
        return self._trajectory

    def count_c(self) -> int:
        c = 0
        for candidate, slope in self._local_candidates:
            if slope is None or slope >= -CONFIG.tol_angle:
                continue
            if candidate.kind in (EventKind.INDEFINITE_INFLECTION, EventKind.CUSP_TYPE_TWO):
                c += 1
        return c

    def stable_genus_bound(self) -> Fraction:
        trajectory = self.genus_trajectory()
        p, q, c = trajectory.p, trajectory.q, self.count_c()
        bound = Fraction(common_stab_genus(p, q, c))
        if trajectory.peak > bound:
            raise PeakExceedsBound(f"Trajectory peak {trajectory.peak} exceeds (p + q + c)/2 = {bound}")
        return bound

    def stable_genus_report(self) -> StableGenusReport:
        self.stable_genus_bound()
        return stable_genus_report(self.genus_trajectory(), self.count_c())


def critical_census(g: Graphic, t: float) -> CriticalCensus:
    return SweepService(g).critical_census(t)


def genus_at(g: Graphic, t: float) -> int:
    return SweepService(g).genus_at(t)


def event_schedule(g: Graphic) -> List[Event]:
    return SweepService(g).event_schedule()


def genus_trajectory(g: Graphic) -> Trajectory:
    return SweepService(g).genus_trajectory()


def count_c(g: Graphic) -> int:
    return SweepService(g).count_c()


def stable_genus_bound(g: Graphic) -> Fraction:
    return SweepService(g).stable_genus_bound()


def doubly_tangent_lines(g: Graphic) -> List[DoubleTangent]:
    return SweepService(g).doubly_tangent_lines()
