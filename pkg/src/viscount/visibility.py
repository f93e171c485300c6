"""Exact weak-visibility sets and counts from a viewpoint.

The main routine is a rotational sweep around the viewpoint.  An
independent ray-casting oracle, a single-target test and the endpoint
visibility graph sit next to it.  All arithmetic runs on integers after
rescaling the scene and viewpoint by a common denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Sequence

from .kernel import Point, Segment, _open_blocked
from .scene import Scene, segments_conflict


class ViewpointOnSegmentError(ValueError):
    pass


class GeneralPositionError(ValueError):
    pass


class CrossingTargetError(ValueError):
    pass


@dataclass(frozen=True)
class VisibleSet:
    viewpoint: Point
    visible: frozenset

    @property
    def count(self) -> int:
        return len(self.visible)


def _scaled(segments: Sequence[Segment], scale: int, coords, p: Point):
    """Integer coordinates of ``segments`` translated so that ``p`` is the origin."""
    L = scale
    for c in (p.x.denominator, p.y.denominator):
        L = L * c // math.gcd(L, c)
    f = L // scale
    px = p.x.numerator * (L // p.x.denominator)
    py = p.y.numerator * (L // p.y.denominator)
    return [
        (s.id, ax * f - px, ay * f - py, bx * f - px, by * f - py)
        for s, (ax, ay, bx, by) in zip(segments, coords)
    ]


def _prepare(scene: Scene, p: Point):
    return _scaled(scene.segments, scene.scale, scene.int_coords, p)


def _contains_origin(ax, ay, bx, by) -> bool:
    return ax * by - ay * bx == 0 and ax * bx + ay * by <= 0


def _half(x, y) -> int:
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(*u), _half(*v)
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


_angle_key = cmp_to_key(_angle_cmp)


def _direction(x, y):
    g = math.gcd(x, y)
    return (x // g, y // g), g


class _Active:
    """A segment crossing the sweep ray, oriented counter-clockwise a -> b."""

    __slots__ = ("id", "ax", "ay", "bx", "by", "end")

    def __init__(self, sid, ax, ay, bx, by, end):
        self.id = sid
        self.ax, self.ay, self.bx, self.by = ax, ay, bx, by
        self.end = end

    def hit(self, dx, dy):
        """Parameter of the crossing with ray t*(dx, dy) as (num, den), den > 0."""
        ex, ey = self.bx - self.ax, self.by - self.ay
        num = self.ax * ey - self.ay * ex
        den = dx * ey - dy * ex
        if den < 0:
            num, den = -num, -den
        return num, den


def visible_ids(items) -> set:
    """Rotational sweep over pre-translated integer segments ``(id, ax, ay, bx, by)``."""
    events: dict = {}
    radial_points = []

    def ev(d):
        e = events.get(d)
        if e is None:
            e = events[d] = ([], [], [])  # starts, ends, points (lam, id)
        return e

    actives = []
    for sid, ax, ay, bx, by in items:
        if _contains_origin(ax, ay, bx, by):
            raise ViewpointOnSegmentError(f"viewpoint lies on segment {sid}")
        c = ax * by - ay * bx
        if c < 0:
            ax, ay, bx, by = bx, by, ax, ay
        da, ga = _direction(ax, ay)
        db, gb = _direction(bx, by)
        ev(da)[2].append((ga, sid))
        ev(db)[2].append((gb, sid))
        if c == 0:
            continue
        seg = _Active(sid, ax, ay, bx, by, db)
        actives.append(seg)
        ev(da)[0].append(seg)
        ev(db)[1].append(seg)

    if not events:
        return set()
    order = sorted(events, key=_angle_key)
    d0 = order[0]
    span = [
        s for s in actives
        if s.ax * d0[1] - s.ay * d0[0] > 0 and d0[0] * s.by - d0[1] * s.bx > 0
    ]

    def span_cmp(s, t):
        n1, q1 = s.hit(*d0)
        n2, q2 = t.hit(*d0)
        a, b = n1 * q2, n2 * q1
        return -1 if a < b else (1 if a > b else 0)

    span.sort(key=cmp_to_key(span_cmp))
    status = span
    visible = set()

    for d in order:
        dx, dy = d
        starts, ends, points = events[d]
        # sight line exactly along this event direction
        lam_min = min(lam for lam, _ in points)
        nearest_span = None
        for s in status:
            if s.end != d:
                nearest_span = s
                break
        if nearest_span is not None:
            num, den = nearest_span.hit(dx, dy)
            span_first = num < lam_min * den
        else:
            span_first = False
        if span_first:
            visible.add(nearest_span.id)
        else:
            visible.update(sid for lam, sid in points if lam == lam_min)

        if ends:
            gone = {id(s) for s in ends}
            status = [s for s in status if id(s) not in gone]
        for s in starts:
            _insert(status, s, dx, dy)
        if status:
            visible.add(status[0].id)
    return visible


def _closer(s: _Active, t: _Active, dx, dy) -> bool:
    """Is ``s`` (starting on ray d) nearer than ``t`` just counter-clockwise of d?"""
    # s.a = lam_s * d
    lam_s_num = s.ax * dx + s.ay * dy
    dd = dx * dx + dy * dy
    if t.ax * dy - t.ay * dx == 0 and t.ax * dx + t.ay * dy > 0:
        # t also starts on this ray
        lam_t_num = t.ax * dx + t.ay * dy
        if lam_s_num != lam_t_num:
            return lam_s_num < lam_t_num
        ex, ey = s.ax, s.ay
        vsx, vsy = s.bx - ex, s.by - ey
        vtx, vty = t.bx - ex, t.by - ey
        lhs = (vsx * ex + vsy * ey) * (ex * vty - ey * vtx)
        rhs = (vtx * ex + vty * ey) * (ex * vsy - ey * vsx)
        return lhs < rhs
    num, den = t.hit(dx, dy)
    # lam_s = lam_s_num / dd ; compare with num / den
    return lam_s_num * den < num * dd


def _insert(status: list, s: _Active, dx, dy) -> None:
    lo, hi = 0, len(status)
    while lo < hi:
        mid = (lo + hi) // 2
        if _closer(s, status[mid], dx, dy):
            hi = mid
        else:
            lo = mid + 1
    status.insert(lo, s)


def visible_set(scene: Scene, p: Point) -> VisibleSet:
    return VisibleSet(p, frozenset(visible_ids(_prepare(scene, p))))


def visibility_count(scene: Scene, p: Point) -> int:
    return len(visible_ids(_prepare(scene, p)))


# ------------------------------------------------------------------ oracle


def check_general_position(items) -> None:
    """Raise unless the origin is on no segment and no line through two endpoints."""
    seen = {}
    for sid, ax, ay, bx, by in items:
        if _contains_origin(ax, ay, bx, by):
            raise ViewpointOnSegmentError(f"viewpoint lies on segment {sid}")
        for x, y in ((ax, ay), (bx, by)):
            (ux, uy), _ = _direction(x, y)
            if uy < 0 or (uy == 0 and ux < 0):
                ux, uy = -ux, -uy
            prev = seen.setdefault((ux, uy), (x, y))
            if prev != (x, y):
                raise GeneralPositionError(
                    f"viewpoint is collinear with endpoints {prev} and {(x, y)} (scaled)"
                )


def oracle_ids(items) -> set:
    check_general_position(items)
    dirs = sorted({(x, y) for _, ax, ay, bx, by in items for x, y in ((ax, ay), (bx, by))},
                  key=_angle_key)
    visible = set()
    k = len(dirs)
    for i in range(k):
        u, v = dirs[i], dirs[(i + 1) % k]
        if k == 1:
            probes = [(-u[0], -u[1])]
        else:
            c = u[0] * v[1] - u[1] * v[0]
            wx, wy = u[0] + v[0], u[1] + v[1]
            probes = [(wx, wy) if c > 0 else (-wx, -wy)]
        for wx, wy in probes:
            hit = _first_hit(items, wx, wy)
            if hit is not None:
                visible.add(hit)
    # sight lines ending exactly at an endpoint (shared endpoints can be
    # visible along a single ray only)
    for sid, ax, ay, bx, by in items:
        for ex, ey in ((ax, ay), (bx, by)):
            if not any(_open_blocked(0, 0, ex, ey, *s[1:]) for s in items):
                visible.add(sid)
    return visible


def _first_hit(items, dx, dy):
    best = None  # (num, den, id)
    for sid, ax, ay, bx, by in items:
        ex, ey = bx - ax, by - ay
        den = dx * ey - dy * ex
        if den == 0:
            continue
        num = ax * ey - ay * ex
        u = ax * dy - ay * dx
        if den < 0:
            den, num, u = -den, -num, -u
        if num <= 0 or u < 0 or u > den:
            continue
        if best is None or num * best[1] < best[0] * den or (
            num * best[1] == best[0] * den and sid < best[2]
        ):
            best = (num, den, sid)
    return None if best is None else best[2]


def visible_set_oracle(scene: Scene, p: Point) -> VisibleSet:
    """Ray-casting reference: one ray per angular gap between endpoint directions."""
    return VisibleSet(p, frozenset(oracle_ids(_prepare(scene, p))))


def in_general_position(scene: Scene, p: Point) -> bool:
    try:
        check_general_position(_prepare(scene, p))
    except (GeneralPositionError, ViewpointOnSegmentError):
        return False
    return True


# ---------------------------------------------------------- single target


def is_target_visible(scene: Scene, p: Point, t: Segment) -> bool:
    for s in scene.segments:
        if segments_conflict(s, t):
            raise CrossingTargetError(f"target crosses scene segment {s.id}")
    joined = scene.plus(t)
    return joined.n - 1 in visible_ids(_prepare(joined, p))


def target_visible_fast(occluders: Scene, p: Point, t: Segment) -> bool:
    """Weak visibility of ``t`` by covering its angular interval with shadows.

    Within their common angular range two non-crossing segments keep the same
    radial order, so each occluder is wholly in front of ``t`` or wholly
    behind it there.  ``t`` is visible iff the closed shadows of the occluders
    in front leave part of its angular interval uncovered.
    """
    base = occluders.scale if occluders.n else 1
    for c in (t.a.x, t.a.y, t.b.x, t.b.y):
        base = base * c.denominator // math.gcd(base, c.denominator)
    f = base // occluders.scale if occluders.n else 1
    coords = [(ax * f, ay * f, bx * f, by * f) for ax, ay, bx, by in occluders.int_coords]
    coords.append(tuple(int(c * base) for c in (t.a.x, t.a.y, t.b.x, t.b.y)))
    items = _scaled(list(occluders.segments) + [t], base, coords, p)
    _, tax, tay, tbx, tby = items[-1]
    occ = items[:-1]
    for sid, ax, ay, bx, by in occ:
        if _contains_origin(ax, ay, bx, by):
            raise ViewpointOnSegmentError(f"viewpoint lies on segment {sid}")
    if _contains_origin(tax, tay, tbx, tby):
        raise ViewpointOnSegmentError("viewpoint lies on the target")
    c = tax * tby - tay * tbx
    if c == 0:
        # seen edge-on: only the sight line to the nearer endpoint
        near = (tax, tay) if tax * tax + tay * tay <= tbx * tbx + tby * tby else (tbx, tby)
        return not any(_open_blocked(0, 0, near[0], near[1], *s[1:]) for s in occ)
    for ex, ey in ((tax, tay), (tbx, tby)):
        if not any(_open_blocked(0, 0, ex, ey, *s[1:]) for s in occ):
            return True
    if c < 0:
        tax, tay, tbx, tby = tbx, tby, tax, tay
    U, V = (tax, tay), (tbx, tby)
    target = _Active(-1, tax, tay, tbx, tby, None)
    covers = []
    for sid, ax, ay, bx, by in occ:
        cs = ax * by - ay * bx
        if cs == 0:
            near = (ax, ay) if ax * ax + ay * ay <= bx * bx + by * by else (bx, by)
            if _in_arc(near, U, V):
                num, den = target.hit(*near)
                if den < num:
                    covers.append((near, near))
            continue
        if cs < 0:
            ax, ay, bx, by = bx, by, ax, ay
        A, B = (ax, ay), (bx, by)
        if _in_arc(A, U, V):
            lo = A
        elif _in_arc(U, A, B):
            lo = U
        else:
            continue
        hi = B if _in_arc(B, lo, V) else V
        w = lo if _cross(lo, hi) == 0 else (lo[0] + hi[0], lo[1] + hi[1])
        n1, d1 = _Active(sid, ax, ay, bx, by, None).hit(*w)
        n2, d2 = target.hit(*w)
        if n1 * d2 < n2 * d1:
            covers.append((lo, hi))
    return not _covered(U, V, covers)


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _in_arc(d, P, Q) -> bool:
    """Direction ``d`` in the closed ccw arc from P to Q (arc shorter than pi)."""
    return _cross(P, d) >= 0 and _cross(d, Q) >= 0 and (d[0] * P[0] + d[1] * P[1] > 0 or _cross(P, d) > 0)


def _covered(U, V, covers) -> bool:
    covers.sort(key=cmp_to_key(lambda s, t: -_sign(_cross(s[0], t[0]))))
    reach = None
    for lo, hi in covers:
        if reach is None:
            if _cross(U, lo) != 0:
                return False
            reach = hi
            continue
        if _cross(reach, lo) > 0:
            return False
        if _cross(reach, hi) > 0:
            reach = hi
    return reach is not None and _cross(reach, V) == 0


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# --------------------------------------------------------- visibility graph


@dataclass(frozen=True)
class VisibilityGraph:
    """Vertex ``2*i + k`` is endpoint ``k`` of segment ``i``."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    @property
    def m(self) -> int:
        return len(self.edges)


def visibility_graph(scene: Scene) -> VisibilityGraph:
    k = scene.scale
    pts = [(int(p.x * k), int(p.y * k)) for p in scene.endpoints]
    segs = scene.int_coords
    boxes = [(min(a, c), max(a, c), min(b, d), max(b, d)) for a, b, c, d in segs]
    edges = []
    N = len(pts)
    for u in range(N):
        ux, uy = pts[u]
        for v in range(u + 1, N):
            if v == u + 1 and u % 2 == 0:
                edges.append((u, v))
                continue
            vx, vy = pts[v]
            if (ux, uy) == (vx, vy):
                edges.append((u, v))
                continue
            x0, x1 = (ux, vx) if ux <= vx else (vx, ux)
            y0, y1 = (uy, vy) if uy <= vy else (vy, uy)
            blocked = False
            for (ax, ay, bx, by), (bx0, bx1, by0, by1) in zip(segs, boxes):
                if bx1 < x0 or bx0 > x1 or by1 < y0 or by0 > y1:
                    continue
                if _open_blocked(ux, uy, vx, vy, ax, ay, bx, by):
                    blocked = True
                    break
            if not blocked:
                edges.append((u, v))
    return VisibilityGraph(N, tuple(edges))
