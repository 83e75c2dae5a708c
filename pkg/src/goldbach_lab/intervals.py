"""Outward-rounded interval arithmetic over binary floats.

Every operation widens its result by one ulp per endpoint (math.nextafter),
so the returned interval encloses the exact real result whenever the operand
intervals enclose their operands.  This is the soundness basis for the
branch-and-bound region certificates; only the operations the region bounds
need are provided (+, -, *, /, sqrt, min/max, integer powers).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_INF = math.inf


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> "Interval":
        """Exact enclosure of a number; Fractions and non-representable
        values get a one-ulp-wide interval."""
        if isinstance(x, Fraction) or isinstance(x, int):
            f = float(x)
            exact = Fraction(f) == Fraction(x)
            return cls(f, f) if exact else cls(_down(f), _up(f))
        return cls(float(x), float(x))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x) -> bool:
        if isinstance(x, Fraction):
            return Fraction(self.lo) <= x <= Fraction(self.hi)
        return self.lo <= x <= self.hi

    def __add__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo + o.lo), _up(self.hi + o.hi))

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(_down(self.lo - o.hi), _up(self.hi - o.lo))

    def __rsub__(self, other) -> "Interval":
        return _coerce(other) - self

    def __mul__(self, other) -> "Interval":
        o = _coerce(other)
        products = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo,
                    self.hi * o.hi)
        return Interval(_down(min(products)), _up(max(products)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        o = _coerce(other)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError(f"divisor interval {o} contains zero")
        quotients = (self.lo / o.lo, self.lo / o.hi, self.hi / o.lo,
                     self.hi / o.hi)
        return Interval(_down(min(quotients)), _up(max(quotients)))

    def __rtruediv__(self, other) -> "Interval":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "Interval":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = Interval(1.0, 1.0)
        for _ in range(k):
            out = out * self
        return out

    def sqrt(self) -> "Interval":
        if self.lo < 0:
            raise ValueError(f"sqrt of interval reaching below zero: {self}")
        # math.sqrt is correctly rounded, so one ulp outward is enough
        return Interval(_down(math.sqrt(self.lo)), _up(math.sqrt(self.hi)))

    def min_with(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(min(self.lo, o.lo), min(self.hi, o.hi))

    def max_with(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(max(self.lo, o.lo), max(self.hi, o.hi))

    def hull(self, other) -> "Interval":
        o = _coerce(other)
        return Interval(min(self.lo, o.lo), max(self.hi, o.hi))


def _coerce(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


@dataclass(frozen=True)
class IntervalBox:
    """An axis-aligned rectangle in the (x, y) plane with float bounds."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self) -> None:
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise ValueError(f"empty box {self}")

    @property
    def x(self) -> Interval:
        return Interval(self.x_lo, self.x_hi)

    @property
    def y(self) -> Interval:
        return Interval(self.y_lo, self.y_hi)

    @property
    def max_width(self) -> float:
        return max(self.x_hi - self.x_lo, self.y_hi - self.y_lo)

    def contains_point(self, x: float, y: float) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi

    def split(self) -> list["IntervalBox"]:
        """Quadrisect along both axes (bisect only the non-degenerate ones)."""
        xm = 0.5 * (self.x_lo + self.x_hi)
        ym = 0.5 * (self.y_lo + self.y_hi)
        xs = [(self.x_lo, xm), (xm, self.x_hi)] if self.x_lo < xm < self.x_hi \
            else [(self.x_lo, self.x_hi)]
        ys = [(self.y_lo, ym), (ym, self.y_hi)] if self.y_lo < ym < self.y_hi \
            else [(self.y_lo, self.y_hi)]
        return [IntervalBox(a, b, c, d) for a, b in xs for c, d in ys]

    def corners(self) -> list[tuple[float, float]]:
        return [(self.x_lo, self.y_lo), (self.x_lo, self.y_hi),
                (self.x_hi, self.y_lo), (self.x_hi, self.y_hi)]
