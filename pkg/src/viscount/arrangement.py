"""Planar arrangements of lines, rays and segments with point location.

Curves are merged per supporting line, intersected pairwise and clipped to
a rational box that strictly contains every vertex and any requested query
window.  The box sides become extra edges; the region outside the box is
dropped, so every face of the arrangement corresponds to exactly one face
inside the box.  Stats leave out the box vertices and box edges.

Point location uses vertical slabs between consecutive vertex abscissae;
both the slabs and the representative face points are built on first use.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .kernel import Line, Point, Ray, Segment, line_intersection

Curve = Union[Line, Ray, Segment]


@dataclass(frozen=True)
class LocateResult:
    face: int
    edge: Optional[int] = None
    vertex: Optional[int] = None

    @property
    def on_boundary(self):
        if self.vertex is not None:
            return ("vertex", self.vertex)
        if self.edge is not None:
            return ("edge", self.edge)
        return None


@dataclass(frozen=True)
class SubdivisionStats:
    V: int
    E: int
    F: int
    boundary_segment_count: int

    def __iter__(self):
        return iter((self.V, self.E, self.F, self.boundary_segment_count))


# ------------------------------------------------------------ curve merging


def _normalise(c: Curve):
    """(line, lo, hi) with lo/hi the parameter interval, None for unbounded."""
    if isinstance(c, Segment):
        line = Line.through(c.a, c.b)
        ta, tb = line.param(c.a), line.param(c.b)
        return line, min(ta, tb), max(ta, tb)
    if isinstance(c, Ray):
        line = Line.through(c.origin, Point(c.origin.x + c.dx, c.origin.y + c.dy))
        t0 = line.param(c.origin)
        dpar = c.dx if line.B != 0 else c.dy
        return (line, t0, None) if dpar > 0 else (line, None, t0)
    if isinstance(c, Line):
        return Line.make(c.A, c.B, c.C), None, None
    raise TypeError(f"not a curve: {c!r}")


def _lo_key(t):
    return (0, 0) if t is None else (1, t)


def merge_curves(curves: Iterable[Curve]):
    """Union of collinear pieces, as a canonical sorted list of (line, lo, hi)."""
    by_line: dict = {}
    for c in curves:
        line, lo, hi = _normalise(c)
        by_line.setdefault(line, []).append((lo, hi))
    out = []
    for line in sorted(by_line, key=lambda l: (l.A, l.B, l.C)):
        ivs = sorted(by_line[line], key=lambda iv: _lo_key(iv[0]))
        cur_lo, cur_hi = ivs[0]
        for lo, hi in ivs[1:]:
            if cur_hi is not None and lo is not None and lo > cur_hi:
                out.append((line, cur_lo, cur_hi))
                cur_lo, cur_hi = lo, hi
            elif cur_hi is not None:
                cur_hi = None if hi is None else max(cur_hi, hi)
        out.append((line, cur_lo, cur_hi))
    return out


def _in_iv(t, lo, hi) -> bool:
    return (lo is None or t >= lo) and (hi is None or t <= hi)


def _pair_candidates(curves):
    """Index pairs whose supporting lines may meet inside both intervals."""
    k = len(curves)
    if k < 2:
        return []
    if k <= 120:
        return [(i, j) for i in range(k) for j in range(i + 1, k)]
    A = np.array([float(c[0].A) for c in curves])
    B = np.array([float(c[0].B) for c in curves])
    C = np.array([float(c[0].C) for c in curves])
    inf = np.inf
    lo = np.array([-inf if c[1] is None else float(c[1]) for c in curves])
    hi = np.array([inf if c[2] is None else float(c[2]) for c in curves])
    vert = B == 0
    out = []
    for i in range(k - 1):
        j = np.arange(i + 1, k)
        det = A[i] * B[j] - A[j] * B[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            x = (C[i] * B[j] - C[j] * B[i]) / det
            y = (A[i] * C[j] - A[j] * C[i]) / det
        ti = y if vert[i] else x
        tj = np.where(vert[j], y, x)
        tol_i = 1e-7 * (1.0 + np.abs(ti))
        tol_j = 1e-7 * (1.0 + np.abs(tj))
        ok = (det != 0) & (ti >= lo[i] - tol_i) & (ti <= hi[i] + tol_i)
        ok &= (tj >= lo[j] - tol_j) & (tj <= hi[j] + tol_j)
        ok |= (det != 0) & ~np.isfinite(x)
        out.extend((i, int(jj)) for jj in j[ok])
    return out


# --------------------------------------------------------------- geometry


def _half(x, y) -> int:
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(*u), _half(*v)
    if hu != hv:
        return hu - hv
    c = u[0] * v[1] - u[1] * v[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _orient(a: Point, b: Point, p: Point) -> int:
    d = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x)
    return (d > 0) - (d < 0)


def _box_clip(line: Line, lo, hi, box):
    X0, Y0, X1, Y1 = box
    if line.B == 0:
        a, b = Y0, Y1
    else:
        # y = (C - A x) / B within [Y0, Y1]
        a, b = X0, X1
        if line.A != 0:
            xs = sorted(((line.C - line.B * Y0) / line.A, (line.C - line.B * Y1) / line.A))
            a, b = max(a, xs[0]), min(b, xs[1])
    return (a if lo is None else lo), (b if hi is None else hi)


# -------------------------------------------------------------- subdivision


class Subdivision:
    """Planar subdivision with half-edges ``2e`` (u -> v) and ``2e + 1`` (v -> u)."""

    def __init__(self, vertices, edges, curve_of_edge, box, n_curves, tails=(), curve_dirs=None):
        self.vertices: list[Point] = vertices
        self.edges: list[tuple[int, int]] = edges
        self.curve_of_edge: list[int] = curve_of_edge  # -1 for box sides
        self.box = box
        self.n_curves = n_curves
        # unbounded pieces leaving the box: (exit vertex, outward dx, dy, edge)
        self.tails = list(tails)
        # integer direction of increasing parameter along each curve
        self.curve_dirs = curve_dirs
        self._build_faces()
        self._slabs = None
        self._reps = None

    # ----------------------------------------------------------- topology
    def _build_faces(self):
        V, E = self.vertices, self.edges
        out: list[list[int]] = [[] for _ in V]
        for e, (u, v) in enumerate(E):
            out[u].append(2 * e)
            out[v].append(2 * e + 1)

        cdirs = self.curve_dirs

        def direction(h):
            u, v = E[h >> 1]
            c = self.curve_of_edge[h >> 1]
            if cdirs is not None and c >= 0:
                dx, dy = cdirs[c]
            else:
                dx, dy = V[v].x - V[u].x, V[v].y - V[u].y
                if c < 0:  # box sides are axis-parallel
                    dx, dy = (dx > 0) - (dx < 0), (dy > 0) - (dy < 0)
            return (-dx, -dy) if h & 1 else (dx, dy)

        dirs = [direction(h) for h in range(2 * len(E))]
        pos = [0] * (2 * len(E))
        for lst in out:
            lst.sort(key=cmp_to_key(lambda a, b: _angle_cmp(dirs[a], dirs[b])))
            for i, h in enumerate(lst):
                pos[h] = i
        self._out = out
        nxt = [0] * (2 * len(E))
        for h in range(2 * len(E)):
            t = h ^ 1
            v = self.origin(t)
            lst = out[v]
            nxt[h] = lst[(pos[t] - 1) % len(lst)]
        self.next = nxt

        cycle_of = [-1] * (2 * len(E))
        cycles = []
        for h in range(2 * len(E)):
            if cycle_of[h] >= 0:
                continue
            cid = len(cycles)
            cyc = []
            g = h
            while cycle_of[g] < 0:
                cycle_of[g] = cid
                cyc.append(g)
                g = nxt[g]
            cycles.append(cyc)

        fv = self._float_vertices()

        def area2(cyc):
            # float first; exact only when cancellation makes the sign doubtful
            s = mag = 0.0
            for h in cyc:
                (ax, ay), (bx, by) = fv[self.origin(h)], fv[self.origin(h ^ 1)]
                s += ax * by - ay * bx
                mag += abs(ax * by) + abs(ay * bx)
            if abs(s) > 1e-9 * mag:
                return s
            s = 0
            for h in cyc:
                a = V[self.origin(h)]
                b = V[self.origin(h ^ 1)]
                s += a.x * b.y - a.y * b.x
            return s

        X0, Y0, X1, Y1 = self.box
        outer_box = None
        for cid, cyc in enumerate(cycles):
            h = cyc[0]
            if self.curve_of_edge[h >> 1] == -1:
                a, b = V[self.origin(h)], V[self.origin(h ^ 1)]
                # box traversed clockwise: the outside
                mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
                left = (-(b.y - a.y), b.x - a.x)
                inward = (X0 + X1) / 2 - mid.x, (Y0 + Y1) / 2 - mid.y
                if left[0] * inward[0] + left[1] * inward[1] < 0:
                    outer_box = cid
                    break
        outers, holes = [], []
        for cid, cyc in enumerate(cycles):
            if cid == outer_box:
                continue
            if area2(cyc) > 0:
                outers.append(cid)
            else:
                holes.append(cid)

        def canon(cid):
            return min((V[self.origin(h)], V[self.origin(h ^ 1)]) for h in cycles[cid])

        outers.sort(key=canon)
        face_of_cycle = {cid: f for f, cid in enumerate(outers)}
        face_of_cycle[outer_box] = -1
        self._cycles = cycles
        self._cycle_of = cycle_of
        self.face_outer = [min(cycles[cid], key=lambda h: (V[self.origin(h)], V[self.origin(h ^ 1)])) for cid in outers]
        self.face_holes: list[list[int]] = [[] for _ in outers]

        def leftmost(cid):
            return min(V[self.origin(h)] for h in cycles[cid])

        for cid in sorted(holes, key=leftmost):
            f = self._face_left_of(leftmost(cid), face_of_cycle)
            face_of_cycle[cid] = f
            self.face_holes[f].append(cycles[cid][0])
        self.face_of_he = [face_of_cycle[cycle_of[h]] for h in range(2 * len(E))]

    def _face_left_of(self, p: Point, face_of_cycle) -> int:
        """Face containing the points just left of ``p`` (p = leftmost vertex of a hole)."""
        V = self.vertices
        best = None  # (distance, kind, ref)
        for e, (u, v) in enumerate(self.edges):
            a, b = V[u], V[v]
            if (a.y - p.y) * (b.y - p.y) > 0 or a.y == b.y:
                continue
            if a.y == p.y:
                x, hit = a.x, ("v", u)
            elif b.y == p.y:
                x, hit = b.x, ("v", v)
            else:
                x = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y)
                hit = ("e", e)
            if x >= p.x:
                continue
            if best is None or x > best[0]:
                best = (x, hit)
        kind, ref = best[1]
        if kind == "e":
            u, v = self.edges[ref]
            h = 2 * ref if V[v].y < V[u].y else 2 * ref + 1  # pointing down: +x side on the left
            return face_of_cycle[self._cycle_of[h]]
        # vertex: sector around direction +x
        lst = self._out[ref]
        east = (1, 0)
        chosen = lst[-1]
        for h in lst:
            u, v = self.edges[h >> 1]
            if h & 1:
                u, v = v, u
            d = (V[v].x - V[u].x, V[v].y - V[u].y)
            if _angle_cmp(d, east) <= 0:
                chosen = h
        return face_of_cycle[self._cycle_of[chosen]]

    def origin(self, h: int) -> int:
        u, v = self.edges[h >> 1]
        return v if h & 1 else u

    @property
    def face_count(self) -> int:
        return len(self.face_outer)

    def is_box_edge(self, e: int) -> bool:
        return self.curve_of_edge[e] == -1

    def is_box_vertex(self, v: int) -> bool:
        p = self.vertices[v]
        X0, Y0, X1, Y1 = self.box
        return p.x in (X0, X1) or p.y in (Y0, Y1)

    def edge_faces(self, e: int) -> tuple[int, int]:
        """(left face, right face) of edge ``e`` oriented u -> v."""
        return self.face_of_he[2 * e], self.face_of_he[2 * e + 1]

    def face_boundary(self, f: int) -> list[int]:
        """Half-edges on the outer boundary and hole boundaries of face ``f``."""
        out = []
        for start in [self.face_outer[f]] + self.face_holes[f]:
            h = start
            while True:
                out.append(h)
                h = self.next[h]
                if h == start:
                    break
        return out

    def face_edges(self, f: int) -> list[int]:
        return sorted({h >> 1 for h in self.face_boundary(f)})

    # ---------------------------------------------------------- rep points
    @property
    def representative_points(self) -> list[Point]:
        if self._reps is None:
            self._reps = [self._rep_point(f) for f in range(self.face_count)]
        return self._reps

    def representative_point(self, f: int) -> Point:
        if self._reps is not None:
            return self._reps[f]
        return self._rep_point(f)

    def _rep_point(self, f: int) -> Point:
        return self.interior_point(f)

    def interior_point(self, f: int, h: Optional[int] = None, frac: Fraction = Fraction(1, 2)) -> Point:
        """Point strictly inside face ``f``.

        Shoots the inward normal from the midpoint of boundary half-edge ``h``
        and stops at ``frac`` of the distance to the first boundary hit.
        """
        V = self.vertices
        if h is None:
            h = self.face_outer[f]
        a, b = V[self.origin(h)], V[self.origin(h ^ 1)]
        mx, my = (a.x + b.x) / 2, (a.y + b.y) / 2
        nx, ny = -(b.y - a.y), b.x - a.x
        others = [g for g in self.face_boundary(f) if g >> 1 != h >> 1]
        # float screening, then exact hits on the few edges near the float minimum
        fv = self._float_vertices()
        fx, fy, fnx, fny = float(mx), float(my), float(nx), float(ny)
        est = []
        for g in others:
            (cx, cy), (dx, dy) = fv[self.origin(g)], fv[self.origin(g ^ 1)]
            ex, ey = dx - cx, dy - cy
            wx, wy = cx - fx, cy - fy
            den = fnx * ey - fny * ex
            scale = abs(fnx * ey) + abs(fny * ex)
            if abs(den) <= 1e-9 * scale:
                est.append((0.0, g))  # near-parallel: decide exactly
                continue
            t = (wx * ey - wy * ex) / den
            u = (wx * fny - wy * fnx) / den
            if t > -1e-9 * (1 + abs(t)) and -1e-7 <= u <= 1 + 1e-7:
                est.append((t, g))
        best = None
        if est:
            tmin = min(t for t, _ in est if t > 0) if any(t > 0 for t, _ in est) else 0.0
            for t, g in est:
                if t <= tmin * (1 + 1e-6) + 1e-12:
                    th = _ray_hit(mx, my, nx, ny, V[self.origin(g)], V[self.origin(g ^ 1)])
                    if th is not None and (best is None or th < best):
                        best = th
        if best is None:
            for g in others:
                th = _ray_hit(mx, my, nx, ny, V[self.origin(g)], V[self.origin(g ^ 1)])
                if th is not None and (best is None or th < best):
                    best = th
        t = best * frac
        return Point(mx + t * nx, my + t * ny)

    def _float_vertices(self):
        if getattr(self, "_fv", None) is None:
            self._fv = [(float(p.x), float(p.y)) for p in self.vertices]
        return self._fv

    def interior_samples(self, f: int, count: int) -> list[Point]:
        """Up to ``count`` distinct interior points of ``f`` from different boundary edges."""
        out = []
        hs = self.face_boundary(f)
        fracs = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 5), Fraction(4, 5)]
        i = 0
        while len(out) < count and i < count * len(hs):
            h = hs[i % len(hs)]
            p = self.interior_point(f, h, fracs[(i // len(hs)) % len(fracs)])
            if p not in out:
                out.append(p)
            i += 1
        return out

    # ----------------------------------------------------------- location
    def _build_slabs(self):
        V = self.vertices
        xs = sorted({p.x for p in V})
        starts: dict = {}
        ends: dict = {}
        self._vertical: dict = {}
        for e, (u, v) in enumerate(self.edges):
            a, b = V[u], V[v]
            if a.x == b.x:
                lo, hi = (a.y, b.y) if a.y < b.y else (b.y, a.y)
                self._vertical.setdefault(a.x, []).append((lo, hi, e))
                continue
            if a.x > b.x:
                a, b = b, a
            starts.setdefault(a.x, []).append(e)
            ends.setdefault(b.x, []).append(e)
        self._vindex = {p: i for i, p in enumerate(V)}
        slabs = []
        active: list[int] = []
        for i in range(len(xs) - 1):
            x = xs[i]
            gone = set(ends.get(x, ()))
            if gone:
                active = [e for e in active if e not in gone]
            xm = (xs[i] + xs[i + 1]) / 2
            for e in starts.get(x, ()):
                j = bisect.bisect_left(active, self._y_at(e, xm), key=lambda f: self._y_at(f, xm))
                active.insert(j, e)
            slabs.append(tuple(active))
        self._xs = xs
        self._slabs = slabs

    def _y_at(self, e: int, x) -> Fraction:
        u, v = self.edges[e]
        a, b = self.vertices[u], self.vertices[v]
        return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)

    def _above_face(self, e: int) -> int:
        u, v = self.edges[e]
        # the half-edge pointing right has the upper side on its left
        return self.face_of_he[2 * e] if self.vertices[v].x > self.vertices[u].x else self.face_of_he[2 * e + 1]

    def _below_face(self, e: int) -> int:
        u, v = self.edges[e]
        return self.face_of_he[2 * e + 1] if self.vertices[v].x > self.vertices[u].x else self.face_of_he[2 * e]

    def locate(self, p: Point) -> LocateResult:
        X0, Y0, X1, Y1 = self.box
        if not (X0 < p.x < X1 and Y0 < p.y < Y1):
            return self._locate_outside(p)
        if self._slabs is None:
            self._build_slabs()
        V = self.vertices
        vid = self._vindex.get(p)
        if vid is not None:
            faces = {self.face_of_he[h] for h in self._out[vid]}
            return LocateResult(min(faces), vertex=vid)
        for lo, hi, e in self._vertical.get(p.x, ()):
            if lo < p.y < hi:
                return LocateResult(min(self.edge_faces(e)), edge=e)
        i = bisect.bisect_right(self._xs, p.x) - 1
        i = min(i, len(self._slabs) - 1)
        slab = self._slabs[i]
        lo, hi = 0, len(slab)
        while lo < hi:
            mid = (lo + hi) // 2
            e = slab[mid]
            u, v = self.edges[e]
            a, b = V[u], V[v]
            if a.x > b.x:
                a, b = b, a
            o = _orient(a, b, p)
            if o == 0:
                return LocateResult(min(self.edge_faces(e)), edge=e)
            if o > 0:
                lo = mid + 1
            else:
                hi = mid
        return LocateResult(self._above_face(slab[lo - 1]))

    def _perimeter(self, p: Point):
        X0, Y0, X1, Y1 = self.box
        W, H = X1 - X0, Y1 - Y0
        if p.y == Y0:
            return p.x - X0
        if p.x == X1:
            return W + p.y - Y0
        if p.y == Y1:
            return W + H + X1 - p.x
        return 2 * W + H + Y1 - p.y

    def _inside_face_at(self, v: int) -> int:
        for h in self._out[v]:
            if self.is_box_edge(h >> 1) and self.face_of_he[h] >= 0:
                return self.face_of_he[h]
        raise AssertionError("box vertex without an inner face")

    def _locate_outside(self, p: Point) -> LocateResult:
        """Outside the box only the tails remain; they cut it into sectors."""
        V = self.vertices
        X0, Y0, X1, Y1 = self.box
        for v, dx, dy, e in self.tails:
            q = V[v]
            wx, wy = p.x - q.x, p.y - q.y
            if wx * dy - wy * dx == 0 and wx * dx + wy * dy >= 0:
                if (wx, wy) == (0, 0):
                    return LocateResult(min(self.edge_faces(e)), vertex=v)
                return LocateResult(min(self.edge_faces(e)), edge=e)
        if not self.tails:
            corner = self.vertices.index(Point(X0, Y0))
            return LocateResult(self._inside_face_at(corner))
        tails = sorted(self.tails, key=lambda t: self._perimeter(V[t[0]]))
        # walk from the box boundary straight out to p
        cx, cy = (X0 + X1) / 2, (Y0 + Y1) / 2
        for k in range(1, 8):
            ox, oy = cx + Fraction(1, 7 * k), cy + Fraction(1, 11 * k)
            q = _exit_point(ox, oy, p, self.box)
            if all(V[t[0]] != q for t in tails):
                break
        s = self._perimeter(q)
        idx = len(tails) - 1
        for i, t in enumerate(tails):
            if self._perimeter(V[t[0]]) < s:
                idx = i
        wx, wy = p.x - q.x, p.y - q.y
        crossings = []
        for i, (v, dx, dy, _) in enumerate(tails):
            a = V[v]
            den = wx * dy - wy * dx
            if den == 0:
                continue
            rx, ry = a.x - q.x, a.y - q.y
            s_w = (rx * dy - ry * dx) / den  # along q -> p
            s_t = (rx * wy - ry * wx) / den  # along the tail
            if 0 < s_w <= 1 and s_t >= 0:
                crossings.append((s_w, i, den))
        for _, i, den in sorted(crossings):
            # den > 0: crossing tail i from its left to its right
            idx = (i - 1) % len(tails) if den > 0 else i
        return LocateResult(self._inside_face_at(tails[idx][0]))

    @property
    def slab_entries(self) -> int:
        if self._slabs is None:
            self._build_slabs()
        return sum(len(s) for s in self._slabs)

    # -------------------------------------------------------------- stats
    def stats(self) -> SubdivisionStats:
        nv = sum(1 for v in range(len(self.vertices)) if not self.is_box_vertex(v))
        ne = sum(1 for e in range(len(self.edges)) if not self.is_box_edge(e))
        return SubdivisionStats(nv, ne, self.face_count, ne)

    def components(self) -> int:
        """Connected components of the curve graph, unbounded ends joined at infinity."""
        parent = list(range(len(self.vertices) + 1))
        inf = len(self.vertices)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        used = set()
        for e, (u, v) in enumerate(self.edges):
            if self.is_box_edge(e):
                continue
            ru = inf if self.is_box_vertex(u) else u
            rv = inf if self.is_box_vertex(v) else v
            used.update((ru, rv))
            parent[find(ru)] = find(rv)
        roots = {find(x) for x in used}
        roots.add(find(inf))
        return len(roots)

    def euler_ok(self) -> bool:
        V, E, F, _ = self.stats()
        return V + 1 - E + F == 1 + self.components()


def _exit_point(ox, oy, p: Point, box) -> Point:
    """Where the segment from inner point (ox, oy) to outer point p leaves the box."""
    X0, Y0, X1, Y1 = box
    dx, dy = p.x - ox, p.y - oy
    ts = []
    if dx > 0:
        ts.append((X1 - ox) / dx)
    elif dx < 0:
        ts.append((X0 - ox) / dx)
    if dy > 0:
        ts.append((Y1 - oy) / dy)
    elif dy < 0:
        ts.append((Y0 - oy) / dy)
    t = min(ts)
    return Point(ox + t * dx, oy + t * dy)


def _ray_hit(mx, my, nx, ny, c: Point, d: Point):
    """Smallest t > 0 with (mx, my) + t (nx, ny) on closed segment [c, d]."""
    ex, ey = d.x - c.x, d.y - c.y
    wx, wy = c.x - mx, c.y - my
    den = nx * ey - ny * ex
    if den == 0:
        if wx * ny - wy * nx != 0:
            return None
        nn = nx * nx + ny * ny
        ts = [(wx * nx + wy * ny) / nn, ((d.x - mx) * nx + (d.y - my) * ny) / nn]
        ts = [t for t in ts if t > 0]
        return min(ts) if ts else None
    t = (wx * ey - wy * ex) / den
    u = (wx * ny - wy * nx) / den
    if t <= 0 or u < 0 or u > 1:
        return None
    return t


# ------------------------------------------------------------------ build


def build_arrangement(curves: Sequence[Curve], window: Iterable[Point] = ()) -> Subdivision:
    """Arrangement of ``curves``; the box also strictly contains ``window`` points."""
    merged = merge_curves(curves)
    if not merged:
        raise ValueError("build_arrangement needs at least one curve")
    params: list[set] = [set() for _ in merged]
    for i, (line, lo, hi) in enumerate(merged):
        for t in (lo, hi):
            if t is not None:
                params[i].add(t)
    for i, j in _pair_candidates(merged):
        li, lo_i, hi_i = merged[i]
        lj, lo_j, hi_j = merged[j]
        p = line_intersection(li, lj)
        if p is None:
            continue
        ti, tj = li.param(p), lj.param(p)
        if _in_iv(ti, lo_i, hi_i) and _in_iv(tj, lo_j, hi_j):
            params[i].add(ti)
            params[j].add(tj)
    pts = [merged[i][0].point_at(t) for i in range(len(merged)) for t in params[i]]
    pts.extend(window)
    if not pts:
        pts = [merged[0][0].point_at(Fraction(0))]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys), Fraction(1))
    box = (min(xs) - span, min(ys) - span, max(xs) + span, max(ys) + span)
    X0, Y0, X1, Y1 = box

    vid: dict[Point, int] = {}
    vertices: list[Point] = []

    def vertex(p: Point) -> int:
        i = vid.get(p)
        if i is None:
            i = vid[p] = len(vertices)
            vertices.append(p)
        return i

    edges: list[tuple[int, int]] = []
    curve_of_edge: list[int] = []
    on_side: list[set] = [set(), set(), set(), set()]  # bottom, right, top, left
    tails = []
    for i, (line, lo, hi) in enumerate(merged):
        clo, chi = _box_clip(line, lo, hi, box)
        ts = set(params[i])
        ts.add(clo)
        ts.add(chi)
        ts = sorted(ts)
        for t in (clo, chi):
            p = line.point_at(t)
            for s, hit in enumerate((p.y == Y0, p.x == X1, p.y == Y1, p.x == X0)):
                if hit:
                    on_side[s].add(p)
        ids = [vertex(line.point_at(t)) for t in ts]
        first = len(edges)
        for u, v in zip(ids, ids[1:]):
            edges.append((u, v))
            curve_of_edge.append(i)
        dx, dy = line.direction
        if (dx if line.B != 0 else dy) < 0:
            dx, dy = -dx, -dy
        if lo is None:
            tails.append((ids[0], -dx, -dy, first))
        if hi is None:
            tails.append((ids[-1], dx, dy, len(edges) - 1))
    corners = [Point(X0, Y0), Point(X1, Y0), Point(X1, Y1), Point(X0, Y1)]
    for s in range(4):
        a, b = corners[s], corners[(s + 1) % 4]
        side = set(on_side[s]) | {a, b}
        key = (lambda p: p.x) if s in (0, 2) else (lambda p: p.y)
        ordered = sorted(side, key=key)
        ids = [vertex(p) for p in ordered]
        for u, v in zip(ids, ids[1:]):
            edges.append((u, v))
            curve_of_edge.append(-1)
    return Subdivision(vertices, edges, curve_of_edge, box, len(merged), tails, [_int_dir(l) for l, _, _ in merged])


def _int_dir(line: Line) -> tuple[int, int]:
    """Integer vector pointing towards increasing parameter on ``line``."""
    if line.B == 0:
        return (0, 1)
    dx, dy = (line.B, -line.A) if line.B > 0 else (-line.B, line.A)
    k = dx.denominator * dy.denominator // math.gcd(dx.denominator, dy.denominator)
    return (int(dx * k), int(dy * k))


def locate(sub: Subdivision, p: Point) -> LocateResult:
    return sub.locate(p)


def subdivision_stats(sub: Subdivision) -> SubdivisionStats:
    return sub.stats()
