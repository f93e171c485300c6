"""Visibility space partitions and their k-relaxed coarsenings.

A VSP is an arrangement whose faces have constant visible sets.  Full mode
uses every line through two scene endpoints.  Pruned mode keeps, for each
pair of mutually visible endpoints, only the two outward rays cut at their
first scene hit, plus the supporting lines of the segments.  Every face is
labelled by a rotational sweep at one interior point.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arrangement import Curve, LocateResult, Subdivision, build_arrangement
from .kernel import Line, Point, Ray, Segment, ray_first_hit
from .scene import Scene
from .visibility import VisibilityGraph, _prepare, in_general_position, visibility_graph, visible_ids

MAX_STORED_SET_N = 4096


class BoundaryQueryError(ValueError):
    """The query point lies on a partition boundary, where counts are undefined."""


# ------------------------------------------------------------- candidates


def candidate_lines_full(scene: Scene) -> list[Line]:
    lines = {Line.through(p, q) for p, q in itertools.combinations(dict.fromkeys(scene.endpoints), 2)}
    return sorted(lines, key=lambda l: (l.A, l.B, l.C))


@dataclass(frozen=True)
class PrunedPiece:
    curve: Curve
    pair: tuple[int, int]  # generating endpoint indices
    cut: Optional[Point] = None  # first scene hit of a ray, if any


@dataclass
class PrunedLineSet:
    pieces: list[PrunedPiece]

    @property
    def curves(self) -> list[Curve]:
        return [p.curve for p in self.pieces]

    def __len__(self) -> int:
        return len(self.pieces)


def _outward(scene: Scene, a: Point, b: Point, skip):
    ray = Ray.away(a, b)
    hit = ray_first_hit(scene, ray, skip)
    if hit is None:
        return ray, None
    return Segment(a, hit[1]), hit[1]


def candidate_pieces_pruned(scene: Scene, graph: Optional[VisibilityGraph] = None) -> PrunedLineSet:
    if graph is None:
        graph = visibility_graph(scene)
    E = scene.endpoints
    pieces = []
    for u, v in graph.edges:
        a, b = E[u], E[v]
        if a == b:
            continue
        skip = set(scene.owners(a)) | set(scene.owners(b))
        for p, q in ((a, b), (b, a)):
            curve, cut = _outward(scene, p, q, skip)
            pieces.append(PrunedPiece(curve, (u, v), cut))
        if u // 2 == v // 2:
            pieces.append(PrunedPiece(Segment(a, b), (u, v)))
    return PrunedLineSet(pieces)


# -------------------------------------------------------------------- VSP


@dataclass
class VspStructure:
    scene: Scene
    subdivision: Subdivision
    counts: list[int]
    visible: Optional[list[int]]  # bitmask over segment ids, per face
    mode: str
    keep_drop_test: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.subdivision.stats().boundary_segment_count

    def face_visible_set(self, f: int) -> frozenset:
        if self.visible is None:
            p = self.subdivision.representative_point(f)
            return frozenset(visible_ids(_prepare(self.scene, p)))
        mask = self.visible[f]
        return frozenset(i for i in range(self.scene.n) if mask >> i & 1)

    def separating_edges(self) -> list[int]:
        sub = self.subdivision
        out = []
        for e in range(len(sub.edges)):
            if sub.is_box_edge(e):
                continue
            l, r = sub.edge_faces(e)
            if self.counts[l] != self.counts[r]:
                out.append(e)
        return out


def _mask(ids) -> int:
    m = 0
    for i in ids:
        m |= 1 << i
    return m


def _general_point(scene: Scene, sub: Subdivision, f: int, check: bool) -> Point:
    p = sub.representative_point(f)
    if not check or in_general_position(scene, p):
        return p
    for k in range(3, 64):
        for h in sub.face_boundary(f)[:4]:
            q = sub.interior_point(f, h, Fraction(1, k))
            if in_general_position(scene, q):
                return q
    raise RuntimeError(f"no general-position point found in face {f}")


def _label(scene: Scene, sub: Subdivision, check: bool):
    sets = []
    for f in range(sub.face_count):
        p = _general_point(scene, sub, f, check)
        sets.append(_mask(visible_ids(_prepare(scene, p))))
    return sets


def _kept_curves(sub: Subdivision, keep) -> list[Curve]:
    tail_edge = {e: (v, dx, dy) for v, dx, dy, e in sub.tails}
    V = sub.vertices
    curves = []
    for e in keep:
        u, v = sub.edges[e]
        if e in tail_edge:
            w, dx, dy = tail_edge[e]
            inner = u if w == v else v
            curves.append(Ray(V[inner], dx, dy))
        else:
            curves.append(Segment(V[u], V[v]))
    return curves


def build_vsp(
    scene: Scene,
    mode: str = "full",
    keep_drop_test: bool = False,
    store_sets: Optional[bool] = None,
) -> VspStructure:
    if mode not in ("full", "pruned"):
        raise ValueError(f"mode must be 'full' or 'pruned', not {mode!r}")
    t0 = time.perf_counter()
    if mode == "full":
        curves: list = list(candidate_lines_full(scene))
    else:
        curves = candidate_pieces_pruned(scene).curves
        curves += [Line.through(s.a, s.b) for s in scene.segments]
    sub = build_arrangement(curves, window=scene.endpoints)
    check = mode == "pruned"
    sets = _label(scene, sub, check)
    if keep_drop_test:
        keep = [
            e for e in range(len(sub.edges))
            if not sub.is_box_edge(e) and sets[sub.edge_faces(e)[0]] != sets[sub.edge_faces(e)[1]]
        ]
        sub = build_arrangement(_kept_curves(sub, keep), window=scene.endpoints)
        sets = _label(scene, sub, True)
    counts = [bin(m).count("1") for m in sets]
    if store_sets is None:
        store_sets = scene.n <= MAX_STORED_SET_N
    st = sub.stats()
    vsp = VspStructure(scene, sub, counts, sets if store_sets else None, mode, keep_drop_test)
    vsp.stats = {
        "V": st.V, "E": st.E, "F": st.F, "N": st.boundary_segment_count,
        "curves": len(curves), "build_ms": (time.perf_counter() - t0) * 1000.0,
    }
    vsp.stats["N_sep"] = len(vsp.separating_edges())
    return vsp


def _checked(res: LocateResult) -> int:
    if res.on_boundary is not None:
        kind, ref = res.on_boundary
        raise BoundaryQueryError(f"query point lies on a partition {kind} ({ref})")
    return res.face


def vsp_query(vsp: VspStructure, p: Point) -> int:
    return vsp.counts[_checked(vsp.subdivision.locate(p))]


# -------------------------------------------------------------- relaxation


@dataclass
class RelaxedVsp:
    vsp: VspStructure
    k: int
    kappa: int
    super_of_face: list[int]
    super_count: list[int]
    kept_edges: list[int]
    n_sep: int

    @property
    def size(self) -> int:
        return len(self.kept_edges)

    @property
    def super_faces(self) -> int:
        return len(self.super_count)


def _crosses_threshold(lo: int, hi: int, kappa: int, k: int) -> bool:
    """Is there j in [lo, hi - 1] with j = kappa (mod k + 1)?"""
    period = k + 1
    first = lo + (kappa - lo) % period
    return first <= hi - 1


def coarsen_vsp(vsp: VspStructure, k: int) -> RelaxedVsp:
    """Drop separating edges except those crossing a residue-class threshold.

    An edge between counts lo < hi is kept iff some j in [lo, hi) satisfies
    j = kappa (mod k + 1).  Faces joined through dropped edges then share one
    band of k + 1 consecutive counts, so any constituent count is within k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    sub = vsp.subdivision
    sep = []
    for e in range(len(sub.edges)):
        if sub.is_box_edge(e):
            continue
        l, r = sub.edge_faces(e)
        cl, cr = vsp.counts[l], vsp.counts[r]
        if cl != cr:
            sep.append((e, min(cl, cr), max(cl, cr)))
    best = None
    for kappa in range(1, k + 2):
        kept = [e for e, lo, hi in sep if _crosses_threshold(lo, hi, kappa, k)]
        if best is None or len(kept) < len(best[1]):
            best = (kappa, kept)
    kappa, kept = best
    keep = set(kept)
    parent = list(range(sub.face_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in range(len(sub.edges)):
        if sub.is_box_edge(e) or e in keep:
            continue
        l, r = sub.edge_faces(e)
        parent[find(l)] = find(r)
    roots: dict = {}
    super_of = []
    counts = []
    for f in range(sub.face_count):
        r = find(f)
        if r not in roots:
            roots[r] = len(counts)
            counts.append(vsp.counts[r])
        super_of.append(roots[r])
    return RelaxedVsp(vsp, k, kappa, super_of, counts, sorted(keep), len(sep))


def relaxed_query(rv: RelaxedVsp, p: Point) -> int:
    sub = rv.vsp.subdivision
    res = sub.locate(p)
    if res.on_boundary is None:
        return rv.super_count[rv.super_of_face[res.face]]
    kind, ref = res.on_boundary
    if kind == "edge":
        faces = sub.edge_faces(ref)
    else:
        faces = [sub.face_of_he[h] for h in sub._out[ref]]
    supers = {rv.super_of_face[f] for f in faces if f >= 0}
    if len(supers) != 1:
        raise BoundaryQueryError(f"query point lies on a kept {kind} ({ref})")
    return rv.super_count[supers.pop()]
