"""Benchmark scene generators.

Scenes A, B and C start from one randomly oriented segment per cell of a
side x side grid.  Coordinates live on an integer grid with ``CELL`` units
per cell and are stored as ``Fraction(k, CELL)``, so a cell has unit size.
Peephole and shatter scenes are the two lower-bound constructions.

The random source is :class:`random.Random` (Mersenne Twister) seeded with
the unsigned 64-bit seed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .kernel import Point, Segment
from .scene import Scene, validate_nondegenerate

CELL = 2**20
KINDS = ("A", "B", "C", "peephole", "shatter")
MAX_SHATTER_K = 16


class GenerationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SceneGenSpec:
    kind: str
    size: int
    seed: int = 0
    # scene C: factor applied to scene B segments about their midpoints
    shrink_c: float = 0.5

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown scene kind {self.kind!r}; expected one of {KINDS}")
        if self.size < 1:
            raise ValueError("size must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.kind == "peephole" and self.size < 2:
            raise ValueError("peephole needs at least 2 gaps")
        if self.kind == "shatter" and self.size > MAX_SHATTER_K:
            raise ValueError(f"shatter needs k <= {MAX_SHATTER_K}")


@dataclass
class Generated:
    scene: Scene
    targets: Optional[list[int]] = None
    # named viewpoints that witness properties of the construction
    probes: dict = field(default_factory=dict)


def generate(spec: SceneGenSpec) -> tuple[Scene, Optional[list[int]]]:
    g = generate_full(spec)
    return g.scene, g.targets


def generate_full(spec: SceneGenSpec) -> Generated:
    rng = random.Random(spec.seed)
    if spec.kind == "A":
        return Generated(scene_a(spec.size, rng))
    if spec.kind == "B":
        return Generated(scene_b(spec.size, rng))
    if spec.kind == "C":
        return Generated(scene_c(spec.size, rng, spec.shrink_c))
    if spec.kind == "peephole":
        return peephole(spec.size, rng)
    return shatter(spec.size, rng)


# ------------------------------------------------------------ perturbation


def _scene_from_ints(rows, denom: int, check: bool = True) -> Scene:
    return Scene.from_segments(
        (Segment(Point(Fraction(ax, denom), Fraction(ay, denom)), Point(Fraction(bx, denom), Fraction(by, denom)))
         for ax, ay, bx, by in rows),
        check=check,
    )


def make_nondegenerate(rows, denom: int, rng: random.Random, jitter: int, tries: int = 60) -> Scene:
    """Jitter endpoints involved in degeneracies until the scene validates."""
    rows = [list(r) for r in rows]
    for _ in range(tries):
        scene = _scene_from_ints(rows, denom, check=False)
        report = validate_nondegenerate(scene)
        if report.ok:
            return Scene.from_segments(scene.segments)
        for e in sorted(report.involved_endpoints()):
            r = rows[e // 2]
            k = 2 * (e % 2)
            for _attempt in range(20):
                dx, dy = rng.randint(-jitter, jitter), rng.randint(-jitter, jitter)
                other = (r[2 - k], r[3 - k])
                if (r[k] + dx, r[k + 1] + dy) != other:
                    r[k] += dx
                    r[k + 1] += dy
                    break
    raise GenerationError(f"scene still degenerate after {tries} perturbation rounds")


# ----------------------------------------------------------- scenes A, B, C


def grid_side(n: int) -> int:
    return math.isqrt(n)


def _random_rows(side: int, rng: random.Random, length: float):
    """One segment of ``length`` cells per cell, random angle, fully inside the cell."""
    rows = []
    half = length / 2
    for cy in range(side):
        for cx in range(side):
            th = rng.uniform(0.0, math.pi)
            hx, hy = half * math.cos(th), half * math.sin(th)
            mx = cx + rng.uniform(abs(hx), 1 - abs(hx))
            my = cy + rng.uniform(abs(hy), 1 - abs(hy))
            rows.append([round((mx - hx) * CELL), round((my - hy) * CELL),
                         round((mx + hx) * CELL), round((my + hy) * CELL)])
    return rows


def _rows_a(n: int, rng: random.Random):
    side = grid_side(n)
    return side, _random_rows(side, rng, 1.0 / side)


def scene_a(n: int, rng: random.Random) -> Scene:
    side, rows = _rows_a(n, rng)
    return make_nondegenerate(rows, CELL, rng, jitter=8)


GAP = CELL >> 8  # growth stops this far short of the first contact


def _grow(rows, side: int):
    """Extend each segment, in id order, along its line towards first contact."""
    arr = np.array(rows, dtype=np.int64)
    lim = side * CELL
    for i in range(len(rows)):
        for end in (1, 0):
            ax, ay, bx, by = (int(v) for v in arr[i])
            if end == 0:
                ax, ay, bx, by = bx, by, ax, ay
            dx, dy = bx - ax, by - ay
            norm = math.hypot(dx, dy)
            t = _boundary_param(bx, by, dx, dy, lim)
            others = np.delete(arr, i, axis=0)
            th = _first_contact(bx, by, dx, dy, others)
            if th is not None:
                t = min(t, th)
            step = t - GAP / norm
            if step <= 0:
                continue
            nx, ny = round(bx + step * dx), round(by + step * dy)
            while step > 0 and _blocked(bx, by, nx, ny, others):
                step /= 2
                nx, ny = round(bx + step * dx), round(by + step * dy)
            if step <= 0 or (nx, ny) == (bx, by):
                continue
            if end == 1:
                arr[i] = (ax, ay, nx, ny)
            else:
                arr[i] = (nx, ny, ax, ay)
    return arr.tolist()


def _boundary_param(x, y, dx, dy, lim) -> float:
    ts = []
    if dx > 0:
        ts.append((lim - x) / dx)
    elif dx < 0:
        ts.append(-x / dx)
    if dy > 0:
        ts.append((lim - y) / dy)
    elif dy < 0:
        ts.append(-y / dy)
    return min(ts)


def _first_contact(ox, oy, dx, dy, segs) -> Optional[float]:
    if len(segs) == 0:
        return None
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]
    ex, ey = bx - ax, by - ay
    wx, wy = ax - ox, ay - oy
    den = dx * ey - dy * ex
    t_num = wx * ey - wy * ex
    u_num = wx * dy - wy * dx
    s = np.sign(den)
    den, t_num, u_num = den * s, t_num * s, u_num * s
    ok = (den != 0) & (t_num > 0) & (u_num >= 0) & (u_num <= den)
    if not ok.any():
        return None
    return float(np.min(t_num[ok] / den[ok]))


def _blocked(x0, y0, x1, y1, segs) -> bool:
    """Does closed segment (x0,y0)-(x1,y1) meet any of ``segs``?  Exact on int64."""
    ax, ay, bx, by = segs[:, 0], segs[:, 1], segs[:, 2], segs[:, 3]

    def orient(px, py, qx, qy, rx, ry):
        return np.sign((qx - px) * (ry - py) - (qy - py) * (rx - px))

    o1 = orient(x0, y0, x1, y1, ax, ay)
    o2 = orient(x0, y0, x1, y1, bx, by)
    o3 = orient(ax, ay, bx, by, x0, y0)
    o4 = orient(ax, ay, bx, by, x1, y1)
    proper = (o1 * o2 <= 0) & (o3 * o4 <= 0)
    # collinear pairs need an overlap test; treat any collinear contact as blocked
    return bool(proper.any())


def scene_b(n: int, rng: random.Random) -> Scene:
    side, rows = _rows_a(n, rng)
    return make_nondegenerate(_grow(rows, side), CELL, rng, jitter=8)


def scene_c(n: int, rng: random.Random, shrink: float = 0.5) -> Scene:
    side, rows = _rows_a(n, rng)
    grown = _grow(rows, side)
    out = []
    for ax, ay, bx, by in grown:
        mx, my = (ax + bx) / 2, (ay + by) / 2
        hx, hy = (bx - ax) * shrink / 2, (by - ay) * shrink / 2
        out.append([round(mx - hx), round(my - hy), round(mx + hx), round(my + hy)])
    return make_nondegenerate(out, CELL, rng, jitter=8)


# ---------------------------------------------------------------- peephole

PEEP_UNIT = 2**10


def peephole(g: int, rng: random.Random) -> Generated:
    """Two gapped horizontal fences over a long target.

    Upper gaps sit at x = 4j, lower gaps at x = 4j + 1 (j = 1..g, in units),
    each half a unit wide.  The target spans the shadow cast through all gap
    pairs.  Fence pieces are jittered vertically so that no
    three endpoints stay collinear.
    """
    U = PEEP_UNIT
    half_gap = U // 4
    # fences reach well past the shadow of the gap pairs so the target
    # cannot be seen around their ends from above
    left, right = -(8 * g + 20) * U, (12 * g + 20) * U
    j = U // 16
    rows = []
    for y, shift in ((6 * U, 0), (4 * U, U)):
        xs = [left]
        for k in range(1, g + 1):
            xs += [4 * k * U + shift - half_gap, 4 * k * U + shift + half_gap]
        xs.append(right)
        for a, b in zip(xs[0::2], xs[1::2]):
            rows.append([a, y + rng.randint(-j, j), b, y + rng.randint(-j, j)])
    rows.append([(13 - 8 * g) * U, rng.randint(-j, j), (12 * g - 3) * U, rng.randint(-j, j)])
    scene = make_nondegenerate(rows, U, rng, jitter=4)
    target = scene.n - 1
    # gap 1 of each fence: midpoint between neighbouring piece ends
    ug = Point((scene.segments[0].b.x + scene.segments[1].a.x) / 2, (scene.segments[0].b.y + scene.segments[1].a.y) / 2)
    lg = Point((scene.segments[g + 1].b.x + scene.segments[g + 2].a.x) / 2,
               (scene.segments[g + 1].b.y + scene.segments[g + 2].a.y) / 2)
    seen = Point(ug.x + 3 * (ug.x - lg.x) + Fraction(1, 7 * U), ug.y + 3 * (ug.y - lg.y) + Fraction(1, 11 * U))
    hidden = Point(Fraction(4 * U * 2 + U // 3, U), Fraction(1000) + Fraction(1, 13))
    return Generated(scene, [target], {"visible": seen, "hidden": hidden})


# ----------------------------------------------------------------- shatter

SHATTER_DENOM = 2**40


def shatter(k: int, rng: random.Random) -> Generated:
    """k stacked targets seen from 2**k far probes; one shield per blocked pair.

    Probe j looks at the targets from angle theta_j on a fan.  For every target
    outside the subset encoded by j a shield is placed on the sight line from
    the target centre towards probe j, close to the target, wide enough to
    hide it from that probe only.
    """
    N = 2**k
    D = 1.0
    span = 2 * math.pi / 3
    dtheta = span / N
    r = D / 8
    w = r * dtheta / 16
    R = 64.0 * (k + 1)
    thetas = [-span / 2 + (j + 0.5) * dtheta for j in range(N)]
    centres = [(0.0, t * D) for t in range(k)]
    targets = [(cx - w, cy, cx + w, cy) for cx, cy in centres]
    mid = (k - 1) * D / 2
    probes = {
        j: (R * math.cos(th), mid + R * math.sin(th)) for j, th in enumerate(thetas)
    }
    shields = []
    for j in range(N):
        px, py = probes[j]
        for t, (cx, cy) in enumerate(centres):
            if j >> t & 1:
                continue
            vx, vy = px - cx, py - cy
            L = math.hypot(vx, vy)
            ux, uy = vx / L, vy / L
            sx, sy = cx + r * ux, cy + r * uy
            hw = 1.6 * w
            shields.append((sx + hw * uy, sy - hw * ux, sx - hw * uy, sy + hw * ux))
    scale = SHATTER_DENOM
    rows = [[round(v * scale) for v in seg] for seg in targets + shields]
    jit = max(1, int(w * scale / 1000))
    scene = make_nondegenerate(rows, scale, rng, jitter=jit)
    pts = {j: Point(Fraction(round(x * scale) + 1, scale), Fraction(round(y * scale) + 1, scale)) for j, (x, y) in probes.items()}
    return Generated(scene, list(range(k)), pts)
