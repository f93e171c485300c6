"""Scenes of non-crossing segments: construction, text I/O and validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .kernel import Point, Segment, common_scale, format_rational, rational, segments_intersect


class SceneError(ValueError):
    pass


class SceneParseError(SceneError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class CrossingSegmentsError(SceneError):
    def __init__(self, i: int, j: int):
        super().__init__(f"segments {i} and {j} share a point other than a common endpoint")
        self.pair = (i, j)


def segments_conflict(s: Segment, t: Segment) -> bool:
    """True if ``s`` and ``t`` meet anywhere except at a common endpoint."""
    shared = {s.a, s.b} & {t.a, t.b}
    if not shared:
        return segments_intersect(s.a, s.b, t.a, t.b)
    if len(shared) == 2:
        return True
    (e,) = shared
    so = s.b if s.a == e else s.a
    to = t.b if t.a == e else t.a
    cr = (so.x - e.x) * (to.y - e.y) - (so.y - e.y) * (to.x - e.x)
    if cr != 0:
        return False
    dot = (so.x - e.x) * (to.x - e.x) + (so.y - e.y) * (to.y - e.y)
    return dot > 0


def find_conflicts(segments: Sequence[Segment]) -> list[tuple[int, int]]:
    k = common_scale(p for s in segments for p in (s.a, s.b))
    ints = [
        (int(s.a.x * k), int(s.a.y * k), int(s.b.x * k), int(s.b.y * k)) for s in segments
    ]
    boxes = [(min(ax, bx), max(ax, bx), min(ay, by), max(ay, by)) for ax, ay, bx, by in ints]
    order = sorted(range(len(segments)), key=lambda i: boxes[i][0])
    out = []
    for pos, i in enumerate(order):
        x0, x1, y0, y1 = boxes[i]
        for j in order[pos + 1:]:
            bj = boxes[j]
            if bj[0] > x1:
                break
            if bj[3] < y0 or bj[2] > y1:
                continue
            if _conflict_int(ints[i], ints[j]):
                a, b = segments[i].id, segments[j].id
                out.append((min(a, b), max(a, b)))
    return sorted(out)


def _orient(px, py, qx, qy, rx, ry) -> int:
    d = (qx - px) * (ry - py) - (qy - py) * (rx - px)
    return (d > 0) - (d < 0)


def _conflict_int(s, t) -> bool:
    """Integer twin of :func:`segments_conflict`."""
    ax, ay, bx, by = s
    cx, cy, dx, dy = t
    o1, o2 = _orient(ax, ay, bx, by, cx, cy), _orient(ax, ay, bx, by, dx, dy)
    if o1 * o2 > 0:
        return False
    o3, o4 = _orient(cx, cy, dx, dy, ax, ay), _orient(cx, cy, dx, dy, bx, by)
    if o3 * o4 > 0:
        return False
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return segments_conflict(Segment.of(ax, ay, bx, by), Segment.of(cx, cy, dx, dy))


@dataclass(frozen=True)
class Scene:
    """Ordered collection of pairwise non-crossing segments with ids 0..n-1."""

    segments: tuple[Segment, ...]

    def __post_init__(self):
        for i, s in enumerate(self.segments):
            if s.id != i:
                raise SceneError(f"segment at position {i} has id {s.id}; ids must be 0..n-1")

    @classmethod
    def from_segments(cls, segments: Iterable[Segment], check: bool = True) -> "Scene":
        segs = tuple(s.with_id(i) for i, s in enumerate(segments))
        if check:
            bad = find_conflicts(segs)
            if bad:
                raise CrossingSegmentsError(*bad[0])
        return cls(segs)

    @classmethod
    def from_coords(cls, coords: Iterable[Sequence], check: bool = True) -> "Scene":
        return cls.from_segments((Segment.of(*c) for c in coords), check=check)

    def __len__(self) -> int:
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    def __getitem__(self, i: int) -> Segment:
        return self.segments[i]

    @property
    def n(self) -> int:
        return len(self.segments)

    @cached_property
    def endpoints(self) -> tuple[Point, ...]:
        """Endpoint ``2*i + k`` is endpoint ``k`` (0 = a, 1 = b) of segment ``i``."""
        return tuple(p for s in self.segments for p in (s.a, s.b))

    @cached_property
    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        if not self.segments:
            return (Fraction(0), Fraction(0), Fraction(1), Fraction(1))
        xs = [p.x for p in self.endpoints]
        ys = [p.y for p in self.endpoints]
        return (min(xs), min(ys), max(xs), max(ys))

    @cached_property
    def scale(self) -> int:
        return common_scale(self.endpoints)

    @cached_property
    def int_coords(self) -> tuple[tuple[int, int, int, int], ...]:
        """Segment coordinates multiplied by :attr:`scale` (exact integers)."""
        k = self.scale
        return tuple(
            (int(s.a.x * k), int(s.a.y * k), int(s.b.x * k), int(s.b.y * k)) for s in self.segments
        )

    def without(self, *ids: int) -> "Scene":
        drop = set(ids)
        return Scene.from_segments((s for s in self.segments if s.id not in drop), check=False)

    def plus(self, seg: Segment) -> "Scene":
        return Scene.from_segments(list(self.segments) + [seg], check=False)

    def owners(self, p: Point) -> list[int]:
        return [s.id for s in self.segments if s.a == p or s.b == p]


# ---------------------------------------------------------------------- I/O


def load_scene(text: str) -> Scene:
    segs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise SceneParseError(lineno, f"expected 4 coordinates, got {len(parts)}")
        try:
            vals = [rational(p) for p in parts]
        except (ValueError, ZeroDivisionError) as exc:
            raise SceneParseError(lineno, str(exc)) from None
        try:
            segs.append(Segment(Point(vals[0], vals[1]), Point(vals[2], vals[3]), len(segs)))
        except ValueError as exc:
            raise SceneParseError(lineno, str(exc)) from None
    return Scene.from_segments(segs)


def save_scene(scene: Scene) -> str:
    out = []
    for s in scene.segments:
        out.append(" ".join(format_rational(v) for v in (s.a.x, s.a.y, s.b.x, s.b.y)))
    return "".join(line + "\n" for line in out)


def read_scene(path) -> Scene:
    return load_scene(Path(path).read_text(encoding="utf-8"))


def write_scene(scene: Scene, path) -> None:
    Path(path).write_bytes(save_scene(scene).encode("utf-8"))


# --------------------------------------------------------------- validation


@dataclass
class DegeneracyReport:
    crossing_pairs: list[tuple[int, int]] = field(default_factory=list)
    # endpoint indices (2*segment + k) of three collinear distinct endpoints
    collinear_triples: list[tuple[int, int, int]] = field(default_factory=list)
    # two parallel lines, each given by a pair of endpoint indices
    parallel_endpoint_line_pairs: list[tuple[tuple[int, int], tuple[int, int]]] = field(
        default_factory=list
    )

    @property
    def ok(self) -> bool:
        return not (self.crossing_pairs or self.collinear_triples or self.parallel_endpoint_line_pairs)

    def involved_endpoints(self) -> set[int]:
        out = set()
        for t in self.collinear_triples:
            out.update(t)
        for l1, l2 in self.parallel_endpoint_line_pairs:
            out.update(l1)
            out.update(l2)
        for i, j in self.crossing_pairs:
            out.update((2 * i, 2 * i + 1, 2 * j, 2 * j + 1))
        return out


def validate_nondegenerate(scene: Scene) -> DegeneracyReport:
    report = DegeneracyReport(crossing_pairs=find_conflicts(scene.segments))
    # a shared endpoint is one point; keep the lowest endpoint index for it
    rep: dict[Point, int] = {}
    for idx, p in enumerate(scene.endpoints):
        rep.setdefault(p, idx)
    idxs = sorted(rep.values())
    k = scene.scale
    pts = [(int(scene.endpoints[i].x * k), int(scene.endpoints[i].y * k)) for i in idxs]
    lines = _lines_by_direction(pts)
    for (dx, dy), by_offset in lines.items():
        for members in by_offset.values():
            if len(members) > 2:
                for tri in combinations(sorted(members), 3):
                    report.collinear_triples.append(tuple(idxs[t] for t in tri))
        if len(by_offset) > 1:
            reps = [tuple(idxs[t] for t in sorted(m)[:2]) for _, m in sorted(by_offset.items())]
            for l1, l2 in combinations(reps, 2):
                report.parallel_endpoint_line_pairs.append((l1, l2))
    report.collinear_triples.sort()
    report.parallel_endpoint_line_pairs.sort()
    return report


def _lines_by_direction(pts: list[tuple[int, int]]) -> dict:
    """Group point pairs by (reduced direction) then by line offset.

    Only directions/lines carrying a coincidence are returned.
    """
    m = len(pts)
    out: dict = {}
    if m < 2:
        return out
    big = max(max(abs(x), abs(y)) for x, y in pts)
    if big < 2**28:
        P = np.array(pts, dtype=np.int64)
        i, j = np.triu_indices(m, 1)
        dx = P[j, 0] - P[i, 0]
        dy = P[j, 1] - P[i, 1]
        flip = (dy < 0) | ((dy == 0) & (dx < 0))
        dx = np.where(flip, -dx, dx)
        dy = np.where(flip, -dy, dy)
        g = np.gcd(dx, dy)
        dx //= g
        dy //= g
        # |dx|, dy < 2**29: pack the reduced direction into one sortable key
        key = ((dx + 2**29) << 30) | dy
        order = np.argsort(key, kind="stable")
        ks = key[order]
        hits = np.flatnonzero(ks[1:] == ks[:-1])
        if hits.size == 0:
            return out
        off = dy * P[i, 0] - dx * P[i, 1]
        flagged = set()
        for h in hits:
            flagged.add(int(h))
            flagged.add(int(h) + 1)
        for pos in sorted(flagged):
            o = order[pos]
            d = (int(dx[o]), int(dy[o]))
            line = out.setdefault(d, {}).setdefault(int(off[o]), set())
            line.add(int(i[o]))
            line.add(int(j[o]))
        return out
    groups: dict = {}
    for a in range(m):
        ax, ay = pts[a]
        for b in range(a + 1, m):
            ddx, ddy = pts[b][0] - ax, pts[b][1] - ay
            if ddy < 0 or (ddy == 0 and ddx < 0):
                ddx, ddy = -ddx, -ddy
            g = math.gcd(ddx, ddy)
            d = (ddx // g, ddy // g)
            o = d[1] * ax - d[0] * ay
            groups.setdefault(d, {}).setdefault(o, set()).update((a, b))
    for d, lines in groups.items():
        if len(lines) > 1 or any(len(v) > 2 for v in lines.values()):
            out[d] = lines
    return out
