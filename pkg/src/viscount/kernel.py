"""Exact rational geometry: points, segments, lines, rays and predicates.

Coordinates are :class:`fractions.Fraction` throughout.  Hot loops elsewhere
in the package rescale a whole scene to integers first (visibility is
invariant under positive scaling), the helpers for that live here too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Sequence, Union

Number = Union[int, Fraction, str]


def rational(value: Number) -> Fraction:
    """Parse an int, Fraction or ``"p/q"`` / decimal-integer string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            q = int(den)
            if q <= 0:
                raise ValueError(f"denominator must be positive in {value!r}")
            return Fraction(int(num), q)
        return Fraction(int(text))
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(rational(x), rational(y))


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point
    id: int = 0

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"degenerate segment {self.id}: a == b")

    @classmethod
    def of(cls, ax, ay, bx, by, id: int = 0) -> "Segment":
        return cls(Point.of(ax, ay), Point.of(bx, by), id)

    @property
    def endpoints(self) -> tuple[Point, Point]:
        return (self.a, self.b)

    def with_id(self, id: int) -> "Segment":
        return Segment(self.a, self.b, id)

    def midpoint(self) -> Point:
        return Point((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)


@dataclass(frozen=True)
class Line:
    """``A*x + B*y = C`` normalised so the leading nonzero coefficient is 1."""

    A: Fraction
    B: Fraction
    C: Fraction

    def __post_init__(self):
        if self.A == 0 and self.B == 0:
            raise ValueError("line needs (A, B) != (0, 0)")

    @classmethod
    def make(cls, A: Number, B: Number, C: Number) -> "Line":
        A, B, C = rational(A), rational(B), rational(C)
        lead = A if A != 0 else B
        if lead == 0:
            raise ValueError("line needs (A, B) != (0, 0)")
        return cls(A / lead, B / lead, C / lead)

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        if p == q:
            raise ValueError("two distinct points required")
        A = q.y - p.y
        B = p.x - q.x
        return cls.make(A, B, A * p.x + B * p.y)

    def side(self, p: Point) -> int:
        v = self.A * p.x + self.B * p.y - self.C
        return (v > 0) - (v < 0)

    def contains(self, p: Point) -> bool:
        return self.A * p.x + self.B * p.y == self.C

    @property
    def direction(self) -> tuple[Fraction, Fraction]:
        return (-self.B, self.A)

    def point_at(self, t: Fraction) -> Point:
        """Point with parameter ``t`` (x for non-vertical lines, y otherwise)."""
        if self.B != 0:
            return Point(t, (self.C - self.A * t) / self.B)
        return Point(self.C / self.A, t)

    def param(self, p: Point) -> Fraction:
        return p.x if self.B != 0 else p.y


@dataclass(frozen=True)
class Ray:
    origin: Point
    dx: Fraction
    dy: Fraction

    def __post_init__(self):
        if self.dx == 0 and self.dy == 0:
            raise ValueError("ray direction must be nonzero")

    @classmethod
    def of(cls, origin: Point, dx: Number, dy: Number) -> "Ray":
        return cls(origin, rational(dx), rational(dy))

    @classmethod
    def away(cls, origin: Point, frm: Point) -> "Ray":
        """Ray starting at ``origin`` pointing away from ``frm``."""
        return cls(origin, origin.x - frm.x, origin.y - frm.y)

    def at(self, t: Fraction) -> Point:
        return Point(self.origin.x + t * self.dx, self.origin.y + t * self.dy)


# ---------------------------------------------------------------- predicates


def cross(ax, ay, bx, by):
    return ax * by - ay * bx


def orientation(p: Point, q: Point, r: Point) -> int:
    d = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
    return (d > 0) - (d < 0)


def on_closed_segment(p: Point, a: Point, b: Point) -> bool:
    if orientation(a, b, p) != 0:
        return False
    return min(a.x, b.x) <= p.x <= max(a.x, b.x) and min(a.y, b.y) <= p.y <= max(a.y, b.y)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments [a,b] and [c,d] share at least one point."""
    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_closed_segment(c, a, b))
        or (o2 == 0 and on_closed_segment(d, a, b))
        or (o3 == 0 and on_closed_segment(a, c, d))
        or (o4 == 0 and on_closed_segment(b, c, d))
    )


def open_segment_blocked(p: Point, q: Point, s: Segment) -> bool:
    """Does the relatively open segment (p, q) meet the closed segment ``s``?"""
    if p == q:
        raise ValueError("open_segment_blocked needs p != q")
    return _open_blocked(p.x, p.y, q.x, q.y, s.a.x, s.a.y, s.b.x, s.b.y)


def _open_blocked(px, py, qx, qy, ax, ay, bx, by) -> bool:
    # plain arithmetic, so it runs on ints as well as Fractions
    dx, dy = qx - px, qy - py
    oa = dx * (ay - py) - dy * (ax - px)
    ob = dx * (by - py) - dy * (bx - px)
    if (oa > 0 and ob > 0) or (oa < 0 and ob < 0):
        return False
    L = dx * dx + dy * dy
    if oa == 0 and ob == 0:
        ta = (ax - px) * dx + (ay - py) * dy
        tb = (bx - px) * dx + (by - py) * dy
        return min(ta, tb) < L and max(ta, tb) > 0
    if oa == 0 or ob == 0:
        ex, ey = (ax, ay) if oa == 0 else (bx, by)
        t = (ex - px) * dx + (ey - py) * dy
        return 0 < t < L
    sx, sy = bx - ax, by - ay
    op = sx * (py - ay) - sy * (px - ax)
    oq = sx * (qy - ay) - sy * (qx - ax)
    return (op > 0 and oq < 0) or (op < 0 and oq > 0)


def line_intersection(l1: Line, l2: Line) -> Optional[Point]:
    det = l1.A * l2.B - l2.A * l1.B
    if det == 0:
        return None
    x = (l1.C * l2.B - l2.C * l1.B) / det
    y = (l1.A * l2.C - l2.A * l1.C) / det
    return Point(x, y)


def ray_segment_param(r: Ray, s: Segment) -> Optional[Fraction]:
    """Smallest parameter t > 0 with r.at(t) on the closed segment ``s``."""
    return _ray_seg_param(r.origin.x, r.origin.y, r.dx, r.dy, s.a.x, s.a.y, s.b.x, s.b.y)


def _ray_seg_param(ox, oy, dx, dy, ax, ay, bx, by):
    ex, ey = bx - ax, by - ay
    den = dx * ey - dy * ex
    wx, wy = ax - ox, ay - oy
    if den == 0:
        if wx * dy - wy * dx != 0:
            return None
        # collinear: nearest point of s strictly ahead
        dd = dx * dx + dy * dy
        ta = Fraction(wx * dx + wy * dy, dd)
        tb = Fraction((bx - ox) * dx + (by - oy) * dy, dd)
        lo, hi = min(ta, tb), max(ta, tb)
        if hi <= 0:
            return None
        if lo > 0:
            return lo
        return None  # origin inside s: excluded by precondition
    t_num = wx * ey - wy * ex
    u_num = wx * dy - wy * dx
    if den < 0:
        den, t_num, u_num = -den, -t_num, -u_num
    if t_num <= 0 or u_num < 0 or u_num > den:
        return None
    return Fraction(t_num, den) if isinstance(t_num, int) else t_num / den


def ray_first_hit(scene, r: Ray, skip: Iterable[int] = ()) -> Optional[tuple[int, Point]]:
    """First segment along ``r`` (smallest positive parameter, ties by id)."""
    skip = set(skip)
    best = None
    for s in scene.segments:
        if s.id in skip:
            continue
        t = ray_segment_param(r, s)
        if t is None:
            continue
        if best is None or t < best[0] or (t == best[0] and s.id < best[1]):
            best = (t, s.id)
    if best is None:
        return None
    return best[1], r.at(best[0])


# ------------------------------------------------------------ integer scaling


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def common_scale(points: Iterable[Point]) -> int:
    return lcm_all(c.denominator for p in points for c in p)


def to_int(value: Fraction, scale: int) -> int:
    n = value * scale
    if n.denominator != 1:
        raise ValueError("scale does not clear the denominator")
    return n.numerator
