"""Horizontal slices of a rotated graphic and the Euler data of the level surface."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, NamedTuple, Optional, Tuple

from models.errors import NonGenericLevel, ParityError
from models.graphic import FoldType, Graphic
from utils.roots import Polynomial, real_roots

from .config_service import CONFIG
from .sweep_service import SweepService
from .validation_service import find_crossings

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class SliceCensus:
    n_def: int
    m_indef: int
    level: float
    angle: float

    @property
    def counts(self) -> Tuple[int, int]:
        return self.n_def, self.m_indef


class SliceEuler(NamedTuple):
    chi_r: Fraction
    chi_sigma: int
    vertices: int
    edges: Fraction


class Breakpoint(NamedTuple):
    height: float
    kind: str  # "tangency" or "cusp"
    index: Optional[int]


@dataclass(frozen=True)
class SliceProfile:
    angle: float
    breakpoints: Tuple[Breakpoint, ...]
    censuses: Tuple[SliceCensus, ...]

    @property
    def levels(self) -> List[float]:
        return [b.height for b in self.breakpoints]


def slice_euler(census: SliceCensus) -> SliceEuler:
    """
    Euler data of the slice Reeb graph R_y and of the level surface.

    R_y has n + m vertices and n/2 + 3m/2 edges, so chi(R_y) = (n - m)/2 and
    the level surface has twice that, chi = n - m.
    """
    n, m = census.n_def, census.m_indef
    if (n + 3 * m) % 2:
        raise ParityError(f"Slice with n={n}, m={m} has a half-integral edge count")
    vertices = n + m
    edges = Fraction(n, 2) + Fraction(3 * m, 2)
    return SliceEuler(Fraction(n - m, 2), n - m, vertices, edges)


class SliceService:
    def __init__(self, graphic: Graphic):
        self.graphic = graphic
        self.sweep = SweepService(graphic)

    @cached_property
    def _crossing_points(self) -> List[Tuple[float, float]]:
        return [c.point for c in find_crossings(self.graphic)]

    def _special_heights(self, t: float) -> List[Tuple[float, str]]:
        sin_t, cos_t = math.sin(t), math.cos(t)
        special = [(p.height, "tangency") for p in self.sweep.critical_points(t)]
        special += [(v.position[0] * sin_t + v.position[1] * cos_t, "cusp") for _, v in self.graphic.cusps()]
        special += [(x * sin_t + y * cos_t, "crossing") for x, y in self._crossing_points]
        return special

    def slice_census(self, t: float, level: float) -> SliceCensus:
        """
        Count transversal crossings of the line {height = level} after rotating by t.

        Raises:
            NonGenericLevel: the line passes through a tangency, cusp or crossing
        """
        tol = CONFIG.tol_geom * self.graphic.scale
        for height, kind in self._special_heights(t):
            if abs(height - level) <= tol:
                raise NonGenericLevel(f"Level {level:.12g} at t={t:.12g} passes through a {kind}")

        eta = CONFIG.attribution_margin
        shift = Polynomial.of([level])
        counts = {FoldType.DEFINITE: 0, FoldType.INDEFINITE: 0}
        for ref, seg in self.graphic.segments():
            for root in real_roots(seg.height(t) - shift, (-eta, 1.0)):
                if not -eta <= root.value < 1.0 - eta:
                    continue
                if root.multiplicity > 1:
                    raise NonGenericLevel(f"Level {level:.12g} is tangent to {ref} at s={root.value:.12g}")
                counts[seg.fold] += 1
        return SliceCensus(counts[FoldType.DEFINITE], counts[FoldType.INDEFINITE], level, t)

    def slice_profile(self, t: float) -> SliceProfile:
        sin_t, cos_t = math.sin(t), math.cos(t)
        breakpoints = [Breakpoint(p.height, "tangency", p.index) for p in self.sweep.critical_points(t)]
        breakpoints += [
            Breakpoint(v.position[0] * sin_t + v.position[1] * cos_t, "cusp", None)
            for _, v in self.graphic.cusps()
        ]
        breakpoints.sort(key=lambda b: b.height)
        heights = [b.height for b in breakpoints]
        if not heights:
            return SliceProfile(t, (), (self.slice_census(t, 0.0),))
        margin = self.graphic.scale
        samples = [heights[0] - margin]
        samples += [0.5 * (lo + hi) for lo, hi in zip(heights[:-1], heights[1:])]
        samples.append(heights[-1] + margin)
        censuses = tuple(self.slice_census(t, level) for level in samples)
        LOGGER.info("Slice profile at t=%.6g: %d breakpoint(s)", t, len(breakpoints))
        return SliceProfile(t, tuple(breakpoints), censuses)


def slice_census(g: Graphic, t: float, level: float) -> SliceCensus:
    return SliceService(g).slice_census(t, level)


def slice_profile(g: Graphic, t: float) -> SliceProfile:
    return SliceService(g).slice_profile(t)
