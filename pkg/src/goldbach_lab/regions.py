"""Branch-and-bound certification of the eight region bounds.

Each region carries a closed-form bounding expression of the shape

    F(x, y) = const + a*y + k*sqrt(3 + x^2) - [x if k == 2]
              + (3 - x*y)/(x + y) + tail(x, y)

with tail either absent, (3 - y^2)/(2y), or (3 - 0.4x)/(x + 0.4), over a
rectangle (possibly clipped by y <= x).  The certificates prove
F <= target + tol over the whole region by recursive box subdivision with
outward-rounded interval enclosures; boxes whose enclosure comes within tol
of the target ("hot boxes", the candidate equality neighborhoods) are
additionally checked at their rational corners with exact arithmetic, the
square root being compared by squaring.

Two of the eight regions attain the target exactly (F = 6 at x = y = 1),
which is why tol = 0 is not certifiable by intervals alone and is rejected.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .intervals import Interval, IntervalBox

TARGET_DEFAULT = Fraction(6)
FR = Fraction


class OutOfRegion(ValueError):
    pass


class CertificationFailed(RuntimeError):
    """A point of the region provably exceeds the target: either the
    expression or the target was transcribed wrongly (never expected for
    the genuine bounds at target 6)."""


class DepthExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RegionSpec:
    """One region: id, bounding-expression parameters, and its box."""

    region_id: int
    const: Fraction
    y_coef: int
    sqrt_coef: int  # 1, or 2 (which also subtracts x)
    tail: Optional[str]  # None | "y" -> (3-y^2)/(2y) | "x04" -> (3-0.4x)/(x+0.4)
    x_lo: Fraction
    x_hi: Fraction
    y_lo: Fraction
    y_hi: Optional[Fraction]  # None means y <= x (triangular region)
    z_side: Optional[str] = None  # side condition annotation (regions 7, 8)

    @property
    def triangular(self) -> bool:
        return self.y_hi is None

    def y_upper(self) -> Fraction:
        return self.x_hi if self.triangular else self.y_hi

    def contains(self, x: Fraction, y: Fraction) -> bool:
        if not (self.x_lo <= x <= self.x_hi and self.y_lo <= y):
            return False
        return y <= (x if self.triangular else self.y_hi)

    def describe(self) -> str:
        y_hi = "x" if self.triangular else str(self.y_hi)
        side = f", {self.z_side}" if self.z_side else ""
        return (f"region {self.region_id}: {self.x_lo} <= x <= {self.x_hi}, "
                f"{self.y_lo} <= y <= {y_hi}{side}")


# The eight bounding displays.  Legend: (id, const, y_coef, sqrt_coef,
# tail, x_lo, x_hi, y_lo, y_hi); sqrt_coef 2 also subtracts x, y_hi None
# means y <= x, and every F includes (3 - xy)/(x + y).
REGIONS: tuple[RegionSpec, ...] = (
    # 1 + 2y + sqrt(3+x^2) + q                 on [1,2] x [0.6,1]
    RegionSpec(1, FR(1), 2, 1, None, FR(1), FR(2), FR(3, 5), FR(1)),
    # 1 + y + 2 sqrt(3+x^2) - x + q            on [2,3] x [0.6,1]
    RegionSpec(2, FR(1), 1, 2, None, FR(2), FR(3), FR(3, 5), FR(1)),
    # 1 + y + sqrt(3+x^2) + q + (3-y^2)/(2y)   on [1,2], 1 <= y <= x
    RegionSpec(3, FR(1), 1, 1, "y", FR(1), FR(2), FR(1), None),
    # 1 + y + 2 sqrt(3+x^2) - x + q            on [2,2.5] x [1,1.7]
    RegionSpec(4, FR(1), 1, 2, None, FR(2), FR(5, 2), FR(1), FR(17, 10)),
    # 1 + y + sqrt(3+x^2) + q + (3-y^2)/(2y)   on [2,2.5], 1.7 <= y <= x
    RegionSpec(5, FR(1), 1, 1, "y", FR(2), FR(5, 2), FR(17, 10), None),
    # 1 + y + sqrt(3+x^2) + q + (3-y^2)/(2y)   on [2.5,3], 1.4 <= y <= x
    RegionSpec(6, FR(1), 1, 1, "y", FR(5, 2), FR(3), FR(7, 5), None),
    # y + sqrt(3+x^2) + q + 1.4                on [2.5,3] x [1,1.4], z <= 0.4
    RegionSpec(7, FR(7, 5), 1, 1, None, FR(5, 2), FR(3), FR(1), FR(7, 5),
               z_side="z <= 0.4"),
    # y + 2 sqrt(3+x^2) - x + q + (3-0.4x)/(x+0.4)  on the same box, z >= 0.4
    RegionSpec(8, FR(0), 1, 2, "x04", FR(5, 2), FR(3), FR(1), FR(7, 5),
               z_side="z >= 0.4"),
)


def region_by_id(region_id: int) -> RegionSpec:
    return REGIONS[region_id - 1]


# ---------------------------------------------------------------------------
# Evaluation: float, interval, and exact-comparison forms
# ---------------------------------------------------------------------------

def _interval_value(spec: RegionSpec, x: Interval, y: Interval) -> Interval:
    s = (Interval.point(3) + x * x).sqrt()
    val = Interval.point(spec.const) + spec.y_coef * y + spec.sqrt_coef * s
    if spec.sqrt_coef == 2:
        val = val - x
    val = val + (3 - x * y) / (x + y)
    if spec.tail == "y":
        val = val + (3 - y * y) / (2 * y)
    elif spec.tail == "x04":
        two_fifths = Interval.point(FR(2, 5))
        val = val + (3 - two_fifths * x) / (x + two_fifths)
    return val


def enclosure(spec: RegionSpec, box: IntervalBox) -> Interval:
    """Interval enclosure of F over the box (a superset of the true range)."""
    return _interval_value(spec, box.x, box.y)


def point_enclosure(spec: RegionSpec, x: float, y: float) -> Interval:
    return _interval_value(spec, Interval(x, x), Interval(y, y))


def region_eval(spec: RegionSpec, x: float, y: float) -> float:
    """Float evaluation of the bounding expression at a point of the region.

    Float coordinates are read as their decimal literals for the membership
    test, so boundary points like y = 1.4 on a region bounded by 7/5 count
    as inside even though the binary float sits just below the rational.
    """
    fx = FR(str(x)) if isinstance(x, float) else FR(x)
    fy = FR(str(y)) if isinstance(y, float) else FR(y)
    if not spec.contains(fx, fy):
        raise OutOfRegion(f"({x}, {y}) outside {spec.describe()}")
    val = float(spec.const) + spec.y_coef * y + spec.sqrt_coef * math.sqrt(3 + x * x)
    if spec.sqrt_coef == 2:
        val -= x
    val += (3 - x * y) / (x + y)
    if spec.tail == "y":
        val += (3 - y * y) / (2 * y)
    elif spec.tail == "x04":
        val += (3 - 0.4 * x) / (x + 0.4)
    return val


def _rational_part(spec: RegionSpec, x: Fraction, y: Fraction) -> Fraction:
    val = spec.const + spec.y_coef * y
    if spec.sqrt_coef == 2:
        val -= x
    val += (3 - x * y) / (x + y)
    if spec.tail == "y":
        val += (3 - y * y) / (2 * y)
    elif spec.tail == "x04":
        val += (3 - FR(2, 5) * x) / (x + FR(2, 5))
    return val


def compare_exact(spec: RegionSpec, x: Fraction, y: Fraction,
                  bound: Fraction) -> int:
    """Exact sign of F(x, y) - bound at a rational point.

    F - bound = (rational part - bound) + k*sqrt(3 + x^2); the square root
    is compared by squaring, so the result is decided in exact arithmetic.
    """
    r = bound - _rational_part(spec, x, y)  # compare k*sqrt(3+x^2) against r
    if r < 0:
        return 1
    lhs_sq = spec.sqrt_coef ** 2 * (3 + x * x)
    rhs_sq = r * r
    if lhs_sq < rhs_sq:
        return -1
    if lhs_sq == rhs_sq:
        return 0
    return 1


# ---------------------------------------------------------------------------
# Branch-and-bound certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CornerCheck:
    x: Fraction
    y: Fraction
    at_most_target: bool
    equality: bool


@dataclass(frozen=True)
class HotBox:
    box: IntervalBox
    enclosure_hi: float
    corner_checks: tuple[CornerCheck, ...]


@dataclass
class RegionCertificate:
    region_id: int
    target: Fraction
    tol: float
    certified: bool
    certified_bound: float  # max certified enclosure hi: proven global bound
    hot_boxes: list
    boxes_processed: int
    max_depth_seen: int


def _fraction_down(q: Fraction) -> float:
    f = float(q)
    return f if FR(f) <= q else math.nextafter(f, -math.inf)


def _fraction_up(q: Fraction) -> float:
    f = float(q)
    return f if FR(f) >= q else math.nextafter(f, math.inf)


def _region_box(spec: RegionSpec) -> IntervalBox:
    return IntervalBox(_fraction_down(spec.x_lo), _fraction_up(spec.x_hi),
                       _fraction_down(spec.y_lo), _fraction_up(spec.y_upper()))


def certify_region(spec: RegionSpec, tol: float = 1e-6, max_depth: int = 40,
                   target: Fraction = TARGET_DEFAULT,
                   order: str = "dfs") -> RegionCertificate:
    """Prove F <= target + tol over the region by box subdivision.

    Hot boxes (certified with enclosure above target - tol) get exact
    rational corner checks confirming F <= target there; a corner above the
    target, or a point enclosure provably above target + tol, raises
    CertificationFailed.  Raises DepthExceeded when a box cannot be settled
    within max_depth subdivisions.
    """
    if tol <= 0:
        raise ValueError("tol must be positive: the bound is attained exactly "
                         "at some region corners, so tol = 0 is not "
                         "certifiable by outward-rounded intervals")
    target_f_hi = _fraction_up(target)
    work: deque = deque([(_region_box(spec), 0)])
    pop = work.pop if order == "dfs" else work.popleft
    hot: list[HotBox] = []
    processed = 0
    certified_bound = -math.inf
    max_depth_seen = 0

    while work:
        box, depth = pop()
        processed += 1
        max_depth_seen = max(max_depth_seen, depth)
        if spec.triangular and FR(box.y_lo) > FR(box.x_hi):
            continue  # entirely outside y <= x
        enc = enclosure(spec, box)
        if enc.hi <= target_f_hi + tol:
            certified_bound = max(certified_bound, enc.hi)
            if enc.hi > target_f_hi - tol:
                hot.append(HotBox(box, enc.hi, _corner_checks(spec, box, target)))
            continue
        # Not certified: a point probe can prove a genuine violation.
        probes = [((box.x_lo + box.x_hi) / 2, (box.y_lo + box.y_hi) / 2)]
        probes += box.corners()
        tol_exact = FR(tol)
        for px, py in probes:
            fx, fy = FR(px), FR(py)
            if not spec.contains(fx, fy):
                continue
            if compare_exact(spec, fx, fy, target + tol_exact) > 0:
                raise CertificationFailed(
                    f"region {spec.region_id}: exact F({fx}, {fy}) > "
                    f"{target} + {tol}")
        if depth >= max_depth:
            raise DepthExceeded(
                f"region {spec.region_id}: box {box} unresolved at depth {depth}")
        for child in box.split():
            work.append((child, depth + 1))

    return RegionCertificate(region_id=spec.region_id, target=target, tol=tol,
                             certified=True, certified_bound=certified_bound,
                             hot_boxes=hot, boxes_processed=processed,
                             max_depth_seen=max_depth_seen)


def _corner_checks(spec: RegionSpec, box: IntervalBox,
                   target: Fraction) -> tuple[CornerCheck, ...]:
    checks = []
    for px, py in box.corners():
        fx, fy = FR(px), FR(py)
        if not spec.contains(fx, fy):
            continue
        sign = compare_exact(spec, fx, fy, target)
        if sign > 0:
            raise CertificationFailed(
                f"region {spec.region_id}: exact corner F({fx}, {fy}) "
                f"exceeds {target}")
        checks.append(CornerCheck(fx, fy, at_most_target=True,
                                  equality=(sign == 0)))
    return tuple(checks)


@dataclass
class AllRegionsReport:
    tol: float
    max_depth: int
    target: Fraction
    certificates: dict  # region_id -> RegionCertificate
    all_certified: bool


def certify_all_regions(tol: float = 1e-6, max_depth: int = 40,
                        target: Fraction = TARGET_DEFAULT) -> AllRegionsReport:
    certificates = {}
    for spec in REGIONS:
        certificates[spec.region_id] = certify_region(spec, tol=tol,
                                                      max_depth=max_depth,
                                                      target=target)
    return AllRegionsReport(tol=tol, max_depth=max_depth, target=target,
                            certificates=certificates,
                            all_certified=all(c.certified
                                              for c in certificates.values()))


# ---------------------------------------------------------------------------
# The three-variable function the region bounds dominate
# ---------------------------------------------------------------------------

def g_value(x: float, y: float, z: float) -> float:
    """g(x,y,z) = y + z + min(1, (3-xz)/(x+z)) + (3-xy)/(x+y) + sqrt(3+x^2),
    for diagnostics; requires x+z > 0 and x+y > 0."""
    return (y + z + min(1.0, (3 - x * z) / (x + z))
            + (3 - x * y) / (x + y) + math.sqrt(3 + x * x))


def g_enclosure(x: Interval, y: Interval, z: Interval) -> Interval:
    """Interval form of g; the min term is evaluated on both branches and
    intersected via the interval minimum, which is its tight enclosure."""
    branch = (3 - x * z) / (x + z)
    min_term = Interval.point(1).min_with(branch)
    return (y + z + min_term + (3 - x * y) / (x + y)
            + (Interval.point(3) + x * x).sqrt())
