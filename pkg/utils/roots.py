"""
Low-degree real polynomial root isolation and refinement.

Roots are isolated by recursion on the derivative: the real roots of p'
split the query interval into pieces on which p is monotone, so each
piece holds at most one simple root, which is refined by bracketed
bisection (Brent). Critical points where p itself vanishes are reported
as multiple roots unless p changes sign on both sides of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import brentq

from models.errors import IdenticallyZero
from services.config_service import CONFIG

# Relative size below which a trailing coefficient is treated as cancellation noise.
_TRIM_RELATIVE = 1e-14
# Rounding error of a polynomial value, in units of eps times the value of |p| at |x|.
_NOISE_ULPS = 1e2


class Root(NamedTuple):
    value: float
    multiplicity: int


RootList = List[Root]


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial, coefficients in ascending degree."""

    coefficients: Tuple[float, ...]

    @classmethod
    def of(cls, coefficients: Iterable[float]) -> "Polynomial":
        coeffs = [float(c) for c in coefficients]
        if not coeffs:
            return cls(())
        scale = max(abs(c) for c in coeffs)
        while coeffs and abs(coeffs[-1]) <= _TRIM_RELATIVE * scale:
            coeffs.pop()
        return cls(tuple(coeffs))

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def norm(self) -> float:
        return max((abs(c) for c in self.coefficients), default=0.0)

    def __call__(self, x):
        if self.is_zero:
            return 0.0 * np.asarray(x, dtype=float)
        return npoly.polyval(x, self.coefficients)

    def deriv(self) -> "Polynomial":
        if self.degree < 1:
            return Polynomial(())
        return Polynomial.of(npoly.polyder(self.coefficients))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.of(npoly.polyadd(self._array(), other._array()))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial.of(npoly.polysub(self._array(), other._array()))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial(())
        return Polynomial.of(npoly.polymul(self.coefficients, other.coefficients))

    def scale(self, factor: float) -> "Polynomial":
        return Polynomial.of(factor * c for c in self.coefficients)

    def _array(self) -> np.ndarray:
        return np.array(self.coefficients if self.coefficients else (0.0,), dtype=float)


def real_roots(p: Polynomial, interval: Sequence[float], tol: float | None = None) -> RootList:
    """
    Return every real root of p in the closed interval, with multiplicity.

    Args:
        p: Polynomial to solve
        interval: (lo, hi) with lo <= hi
        tol: Absolute refinement tolerance on the root values

    Returns:
        Roots sorted by value, strictly increasing

    Raises:
        IdenticallyZero: p is the zero polynomial
    """
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise ValueError(f"Empty interval [{lo}, {hi}]")
    if p.is_zero:
        raise IdenticallyZero("Polynomial vanishes on the whole interval")
    tol = CONFIG.tol_root if tol is None else tol
    return _merge(_isolate(p, lo, hi, tol), tol)


def _isolate(p: Polynomial, lo: float, hi: float, tol: float) -> RootList:
    if p.degree <= 0:
        return []
    c0, c1 = p.coefficients[0], p.coefficients[1]
    if p.degree == 1:
        r = -c0 / c1
        return [Root(r, 1)] if lo <= r <= hi else []

    residual = CONFIG.tol_multiplicity * p.norm
    critical = _isolate(p.deriv(), lo, hi, tol)
    curvature = p.deriv().deriv()

    roots: RootList = []
    knots, values, vanishing = [lo], [float(p(lo))], [abs(float(p(lo))) <= residual]
    for c in critical:
        value = float(p(c.value))
        multiple = abs(value) <= residual and not _splits(p, curvature, c, value)
        if multiple:
            roots.append(Root(c.value, c.multiplicity + 1))
        knots.append(c.value)
        values.append(value)
        vanishing.append(multiple)
    knots.append(hi)
    values.append(float(p(hi)))
    vanishing.append(abs(values[-1]) <= residual)

    critical_values = [c.value for c in critical]
    for end, zero in ((lo, vanishing[0]), (hi, vanishing[-1])):
        if zero and all(abs(end - c) > tol for c in critical_values):
            roots.append(Root(end, 1))

    for left, right, v_left, v_right, z_left, z_right in zip(
        knots[:-1], knots[1:], values[:-1], values[1:], vanishing[:-1], vanishing[1:]
    ):
        if z_left or z_right or right <= left:
            continue
        if v_left * v_right < 0:
            roots.append(Root(brentq(p, left, right, xtol=tol), 1))
    return roots


def _splits(p: Polynomial, curvature: Polynomial, c: Root, value: float) -> bool:
    """True when a simple extremum of p sits just past zero, so two simple roots straddle it."""
    if c.multiplicity != 1:
        return False
    noise = _NOISE_ULPS * np.finfo(float).eps * float(npoly.polyval(abs(c.value), np.abs(p.coefficients)))
    return abs(value) > noise and value * float(curvature(c.value)) < 0


def _merge(roots: RootList, tol: float) -> RootList:
    merged: RootList = []
    for root in sorted(roots):
        if merged and root.value - merged[-1].value <= 10 * tol:
            if root.multiplicity > merged[-1].multiplicity:
                merged[-1] = Root(merged[-1].value, root.multiplicity)
            continue
        merged.append(root)
    return merged


def real_polyroots(coefficients: Sequence[float], lo: float, hi: float) -> List[float]:
    """Fast unrefined real roots in [lo, hi] via the companion matrix (used by dense scans)."""
    poly = Polynomial.of(coefficients)
    if poly.degree < 1:
        return []
    found = npoly.polyroots(poly.coefficients)
    real = [float(z.real) for z in np.atleast_1d(found) if abs(z.imag) <= 1e-9 * max(1.0, abs(z.real))]
    return sorted(r for r in real if lo <= r <= hi)
