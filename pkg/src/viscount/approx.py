"""Sampling estimators of the visibility ratio and the per-target tradeoff structure.

A target ``T`` is cut into ``ell`` pieces.  Each piece gets its own
arrangement whose faces carry a yes/no label for the weak visibility of that
piece, so a query costs ``ell`` point locations and the per-piece
arrangements shrink as ``ell`` grows.  Piece arrangements are built from

* the occluder segments,
* for every pair of mutually visible occluder endpoints whose line meets the
  piece: that line (optionally only the ray beyond the pair, pointing away
  from the piece and cut at its first occluder hit),
* for every piece endpoint ``e`` and occluder endpoint ``b`` that sees ``e``:
  the ray from ``b`` away from ``e``, cut at its first occluder hit.

The visibility of the piece can only change across these curves.
"""

from __future__ import annotations

import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .arrangement import Subdivision, build_arrangement
from .kernel import Point, Ray, Segment, _open_blocked, line_intersection, Line, rational, ray_first_hit
from .scene import Scene, segments_conflict
from .visibility import (
    CrossingTargetError,
    VisibilityGraph,
    target_visible_fast,
    visibility_graph,
    visible_set,
)
from .vsp import BoundaryQueryError

Number = Union[int, float, Fraction, str]

MODES = ("chernoff", "vc", "practical")


def _unit(value: Number, name: str) -> float:
    v = float(rational(value)) if isinstance(value, str) else float(value)
    if not 0 < v < 1:
        raise ValueError(f"{name} must lie strictly between 0 and 1, got {value}")
    return v


# ----------------------------------------------------------- sample sizes


def chernoff_sample_size(delta: Number, fail_prob: Number) -> int:
    """Smallest m with 2 exp(-2 m delta^2) <= fail_prob."""
    d = _unit(delta, "delta")
    p = _unit(fail_prob, "fail_prob")
    m = max(1, math.ceil(math.log(2 / p) / (2 * d * d)))
    # guard the closed form against rounding at the boundary
    while m > 1 and 2 * math.exp(-2 * (m - 1) * d * d) <= p:
        m -= 1
    while 2 * math.exp(-2 * m * d * d) > p:
        m += 1
    return m


def vc_sample_size(n: int, delta: Number, fail_prob: Number, C: Number = Fraction(1, 4), d: int = 2) -> int:
    """m = ceil(C d^2 log2(n) log2(d log2(n) / delta) / delta^2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    dl = _unit(delta, "delta")
    _unit(fail_prob, "fail_prob")
    c = float(rational(C)) if isinstance(C, str) else float(C)
    if c <= 0:
        raise ValueError("C must be positive")
    ln = math.log2(n)
    value = c * d * d * ln * math.log2(d * ln / dl) / (dl * dl)
    return max(1, math.ceil(value - 1e-9))


def practical_sample_size(n: int) -> int:
    """ceil(10 log2(n)^2)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(1, math.ceil(10 * math.log2(n) ** 2 - 1e-9))


def hit_sample_size(n: int, delta: Number, fail_prob: Number, d: int = 2) -> int:
    """Sample size after which every delta-heavy visible set is hit (epsilon-net form).

    Uses VC dimension D = d^2 log2(n) and
    m = max(4/delta log2(2/p), 8D/delta log2(8D/delta)).
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    dl = _unit(delta, "delta")
    p = _unit(fail_prob, "fail_prob")
    D = d * d * math.log2(n)
    return max(1, math.ceil(max(4 / dl * math.log2(2 / p), 8 * D / dl * math.log2(8 * D / dl))))


@dataclass(frozen=True)
class SampleConfig:
    delta: Fraction = Fraction(1, 10)
    fail_prob: Fraction = Fraction(1, 20)
    mode: str = "practical"
    explicit_m: Optional[int] = None
    seed: int = 0
    C: Fraction = Fraction(1, 4)

    def __post_init__(self):
        mode = "practical" if self.mode == "paper_practical" else self.mode
        if mode not in MODES:
            raise ValueError(f"unknown sample mode {self.mode!r}")
        object.__setattr__(self, "mode", mode)
        if self.explicit_m is not None and self.explicit_m < 1:
            raise ValueError("explicit_m must be >= 1")

    def sample_size(self, n: int) -> int:
        if self.explicit_m is not None:
            return self.explicit_m
        if self.mode == "chernoff":
            return chernoff_sample_size(self.delta, self.fail_prob)
        if self.mode == "vc":
            return vc_sample_size(max(n, 2), self.delta, self.fail_prob, self.C)
        return practical_sample_size(max(n, 2))


# --------------------------------------------------------------- sampling


def draw_sample(scene: Scene, m: int, seed: int) -> tuple[int, ...]:
    """m i.i.d. uniform ids, with replacement, from ``random.Random(seed)``."""
    if m < 1:
        raise ValueError("sample size must be >= 1")
    if scene.n == 0:
        raise ValueError("cannot sample from an empty scene")
    rng = random.Random(seed)
    return tuple(rng.randrange(scene.n) for _ in range(m))


def sample_estimate(scene: Scene, sample: Sequence[int], p: Point) -> Fraction:
    """Multiplicity-weighted fraction of sampled targets weakly visible from p."""
    if not sample:
        raise ValueError("empty sample")
    vis = visible_set(scene, p).visible
    return Fraction(sum(1 for t in sample if t in vis), len(sample))


# -------------------------------------------------------- target structure


def resolve_ell(policy: Union[str, int], n: int) -> int:
    if isinstance(policy, int):
        ell = policy
    elif policy in ("1", "one"):
        ell = 1
    elif policy == "quarter_root":
        ell = 1
        while ell**4 < n:
            ell += 1
    elif policy == "sqrt":
        ell = math.isqrt(n - 1) + 1 if n > 1 else 1
    else:
        ell = int(policy)
    if ell < 1:
        raise ValueError("ell must be >= 1")
    return ell


@dataclass
class TargetStructure:
    target: Segment
    target_id: Optional[int]
    ell: int
    pieces: list[Segment]
    arrangements: list[Optional[Subdivision]]
    labels: list[list[bool]]
    lines_hitting: list[int]
    lines_total: int
    build_ms: float = 0.0

    @property
    def edges(self) -> int:
        return sum(a.stats().E for a in self.arrangements if a is not None)

    @property
    def faces(self) -> int:
        return sum(a.stats().F if a is not None else 1 for a in self.arrangements)

    @property
    def memory_proxy(self) -> int:
        return self.edges + self.faces


def _pair_hits(occ: Scene, T: Segment, pairs, whole_lines: bool = False):
    """(param along T, curve) for every endpoint pair whose line meets T."""
    tl = Line.through(T.a, T.b)
    dx, dy = T.b.x - T.a.x, T.b.y - T.a.y
    dd = dx * dx + dy * dy
    out = []
    for a, b in pairs:
        X = line_intersection(Line.through(a, b), tl)
        if X is None:
            continue
        s = ((X.x - T.a.x) * dx + (X.y - T.a.y) * dy) / dd
        if not 0 <= s <= 1:
            continue
        if whole_lines:
            out.append((s, Line.through(a, b)))
            continue
        da = (a.x - X.x) ** 2 + (a.y - X.y) ** 2
        db = (b.x - X.x) ** 2 + (b.y - X.y) ** 2
        near, far = (a, b) if da < db else (b, a)
        if X == near or any(_open_blocked(near.x, near.y, X.x, X.y, *_xy(o)) for o in occ.segments):
            continue
        skip = set(occ.owners(a)) | set(occ.owners(b))
        ray = Ray.away(far, near)
        hit = ray_first_hit(occ, ray, skip)
        out.append((s, ray if hit is None else Segment(far, hit[1])))
    out.sort(key=lambda t: t[0])
    return out


def _xy(s: Segment):
    return s.a.x, s.a.y, s.b.x, s.b.y


def _split_params(params: list[Fraction], ell: int) -> list[Fraction]:
    """ell + 1 cut parameters in [0, 1]; groups of nearly equal size between them."""
    L = len(params)
    pts = [Fraction(0)] + list(params) + [Fraction(1)]
    by_gap: dict[int, int] = {}
    for g in range(1, ell):
        c = g * L // ell  # points before this cut
        by_gap[c] = by_gap.get(c, 0) + 1
    cuts = [Fraction(0)]
    for c in sorted(by_gap):
        r = by_gap[c]
        lo, hi = pts[c], pts[c + 1]
        cuts.extend(lo + (hi - lo) * Fraction(j, r + 1) for j in range(1, r + 1))
    cuts.append(Fraction(1))
    return cuts


def _endpoint_rays(occ: Scene, e: Point):
    out = []
    for b in dict.fromkeys(occ.endpoints):
        if b == e:
            continue
        if any(_open_blocked(b.x, b.y, e.x, e.y, *_xy(o)) for o in occ.segments):
            continue
        ray = Ray.away(b, e)
        hit = ray_first_hit(occ, ray, occ.owners(b))
        out.append(ray if hit is None else Segment(b, hit[1]))
    return out


def build_target_structure(
    scene: Scene,
    T: Segment,
    ell: int,
    candidates: str = "pruned",
    graph: Optional[VisibilityGraph] = None,
    cut_rays: bool = False,
) -> TargetStructure:
    """Tradeoff structure for one target; ``T`` may be a scene segment or external.

    ``candidates`` picks the endpoint pairs: mutually visible ones ("pruned")
    or all of them ("full").  Each pair whose line meets ``T`` contributes that
    whole line, or with ``cut_rays`` only the ray beyond the pair cut at its
    first occluder hit (and only when the nearer endpoint sees ``T`` along it).
    """
    t0 = time.perf_counter()
    if ell < 1:
        raise ValueError("ell must be >= 1")
    tid = next((s.id for s in scene.segments if (s.a, s.b) in ((T.a, T.b), (T.b, T.a))), None)
    if tid is None:
        for s in scene.segments:
            if segments_conflict(s, T):
                raise CrossingTargetError(f"target crosses scene segment {s.id}")
        occ = scene
        full = scene.plus(T)
    else:
        occ = scene.without(tid)
        full = scene
    tpts = {T.a, T.b}
    if candidates == "pruned":
        if graph is None or tid is None:
            graph = visibility_graph(full)
        E = full.endpoints
        pairs = [(E[u], E[v]) for u, v in graph.edges if E[u] != E[v] and E[u] not in tpts and E[v] not in tpts]
    elif candidates == "full":
        pts = [p for p in dict.fromkeys(occ.endpoints)]
        pairs = [(pts[i], pts[j]) for i in range(len(pts)) for j in range(i + 1, len(pts))]
    else:
        raise ValueError("candidates must be 'pruned' or 'full'")
    hits = _pair_hits(occ, T, pairs, whole_lines=not cut_rays)
    params = sorted({s for s, _ in hits})
    cuts = _split_params(params, ell)
    dx, dy = T.b.x - T.a.x, T.b.y - T.a.y
    at = lambda s: Point(T.a.x + s * dx, T.a.y + s * dy)  # noqa: E731
    window = list(full.endpoints)
    pieces, arrs, labels, per_piece = [], [], [], []
    endpoint_rays: dict = {}
    j = 0
    for i in range(ell):
        lo, hi = cuts[i], cuts[i + 1]
        piece = Segment(at(lo), at(hi))
        mine = []
        while j < len(hits) and hits[j][0] < hi:
            mine.append(hits[j][1])
            j += 1
        per_piece.append(len(mine))
        curves = list(occ.segments) + mine
        for e in (piece.a, piece.b):
            if e not in endpoint_rays:
                endpoint_rays[e] = _endpoint_rays(occ, e)
            curves += endpoint_rays[e]
        pieces.append(piece)
        if not curves:
            arrs.append(None)
            labels.append([True])
            continue
        sub = build_arrangement(curves, window=window)
        arrs.append(sub)
        labels.append([target_visible_fast(occ, sub.representative_point(f), piece) for f in range(sub.face_count)])
    ms = (time.perf_counter() - t0) * 1000.0
    return TargetStructure(T, tid, ell, pieces, arrs, labels, per_piece, len(hits), ms)


def target_query(ts: TargetStructure, p: Point, counter: Optional[list] = None) -> bool:
    """OR of the piece labels at p; exactly ``ell`` point locations."""
    seen = False
    for sub, lab in zip(ts.arrangements, ts.labels):
        if counter is not None:
            counter[0] += 1
        if sub is None:
            seen = True
            continue
        res = sub.locate(p)
        if res.on_boundary is not None:
            raise BoundaryQueryError(f"query point lies on a piece boundary {res.on_boundary}")
        seen = seen or lab[res.face]
    return seen


# ---------------------------------------------------------------- counter


@dataclass
class ApproxCounter:
    scene: Scene
    config: SampleConfig
    ell: int
    sample: tuple[int, ...]
    structures: dict[int, TargetStructure]
    multiplicity: Counter = field(default_factory=Counter)
    build_ms: float = 0.0
    locations: int = 0  # point locations performed by the last query

    @property
    def m(self) -> int:
        return len(self.sample)

    @property
    def edges(self) -> int:
        return sum(s.edges for s in self.structures.values())

    @property
    def faces(self) -> int:
        return sum(s.faces for s in self.structures.values())


def build_approx_counter(
    scene: Scene, config: SampleConfig, ell: Union[int, str], sample: Optional[Sequence[int]] = None
) -> ApproxCounter:
    """Draw the sample once (unless given) and build one structure per distinct id."""
    t0 = time.perf_counter()
    ell = resolve_ell(ell, scene.n)
    if sample is None:
        sample = draw_sample(scene, config.sample_size(scene.n), config.seed)
    sample = tuple(sample)
    if not sample or not all(0 <= t < scene.n for t in sample):
        raise ValueError("sample must be a non-empty sequence of segment ids")
    graph = visibility_graph(scene)
    structures = {
        t: build_target_structure(scene, scene[t], ell, graph=graph) for t in sorted(set(sample))
    }
    ms = (time.perf_counter() - t0) * 1000.0
    return ApproxCounter(scene, config, ell, sample, structures, Counter(sample), ms)


def approx_query(counter: ApproxCounter, p: Point) -> Fraction:
    """Weighted fraction of sampled targets seen from p; ell point locations per sample entry."""
    hits = 0
    calls = [0]
    cache: dict[int, bool] = {}
    for t in counter.sample:
        c = [0]
        if t not in cache:
            cache[t] = target_query(counter.structures[t], p, c)
        else:
            # duplicates share a structure but still account for their locations
            c[0] = counter.ell
        calls[0] += c[0]
        hits += cache[t]
    counter.locations = calls[0]
    return Fraction(hits, counter.m)
