"""The three benchmark experiments: count statistics, sampling spread, memory vs query time.

Every experiment is deterministic given its spec.  Probe viewpoints come
from a jittered grid over the scene bounding box, filtered to general
position with deterministic re-jitter.  Only the wall-time columns of the
memtime CSV vary between runs.
"""

from __future__ import annotations

import csv
import io
import random
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional, Sequence

from .approx import (
    SampleConfig,
    approx_query,
    build_approx_counter,
    draw_sample,
    resolve_ell,
    sample_estimate,
)
from .generators import KINDS, SceneGenSpec, generate
from .kernel import Point
from .scene import Scene
from .visibility import in_general_position, visible_set
from .vsp import BoundaryQueryError

EXPERIMENTS = ("counts", "variance", "memtime")
ELL_POLICIES = ("one", "quarter_root", "sqrt")

SCHEMAS = {
    "counts": ("kind", "n", "seed", "probe_count", "min", "avg", "max"),
    "variance": ("kind", "n", "m", "trials", "sigma"),
    "memtime": ("kind", "n", "ell", "m", "edges", "faces", "build_ms", "query_us_mean", "locations_per_query"),
}
WALL_TIME_COLUMNS = ("build_ms", "query_us_mean")

JITTER_DENOM = 2**16


@dataclass(frozen=True)
class ExperimentSpec:
    experiment: str
    kinds: tuple[str, ...]
    sizes: tuple[int, ...]
    seeds: int = 1
    ell_policies: tuple[str, ...] = ELL_POLICIES
    sample_mode: str = "practical"
    delta: Fraction = Fraction(1, 10)
    fail_prob: Fraction = Fraction(1, 20)
    grid: int = 10
    trials: int = 30
    viewpoints: int = 20
    queries: int = 100

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        for k in self.kinds:
            if k not in KINDS:
                raise ValueError(f"unknown scene kind {k!r}")
        if not self.sizes or any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("size ladder must be non-empty and strictly increasing")
        if self.seeds < 1:
            raise ValueError("seeds must be >= 1")
        for e in self.ell_policies:
            if e not in ELL_POLICIES:
                raise ValueError(f"unknown ell policy {e!r}")


def _ell(policy: str, n: int) -> int:
    return resolve_ell("1" if policy == "one" else policy, n)


def probe_points(scene: Scene, seed: int, grid: int = 10) -> Iterator[Point]:
    """Jittered grid over the bounding box (one point per cell), then more rounds.

    Points not in general position are re-jittered inside their cell.
    """
    x0, y0, x1, y1 = scene.bbox
    w = (x1 - x0) or Fraction(1)
    h = (y1 - y0) or Fraction(1)
    rng = random.Random(seed)
    while True:
        for i in range(grid):
            for j in range(grid):
                while True:
                    u = Fraction(rng.randrange(1, JITTER_DENOM), JITTER_DENOM)
                    v = Fraction(rng.randrange(1, JITTER_DENOM), JITTER_DENOM)
                    p = Point(x0 + (i + u) * w / grid, y0 + (j + v) * h / grid)
                    if in_general_position(scene, p):
                        yield p
                        break


def take(it: Iterator[Point], k: int) -> list[Point]:
    return [next(it) for _ in range(k)]


def _scene(kind: str, n: int, seed: int) -> Scene:
    return generate(SceneGenSpec(kind, n, seed))[0]


def _num(x) -> str:
    if isinstance(x, int):
        return str(x)
    x = Fraction(x) if not isinstance(x, float) else x
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return f"{float(x):.6f}"


# ------------------------------------------------------------ experiments


def run_counts(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for kind in spec.kinds:
        for n in spec.sizes:
            for seed in range(spec.seeds):
                scene = _scene(kind, n, seed)
                pts = take(probe_points(scene, seed, spec.grid), spec.grid * spec.grid)
                counts = [len(visible_set(scene, p).visible) for p in pts]
                rows.append({
                    "kind": kind, "n": scene.n, "seed": seed, "probe_count": len(counts),
                    "min": min(counts), "avg": Fraction(sum(counts), len(counts)), "max": max(counts),
                })
    return rows


def _config(spec: ExperimentSpec, seed: int = 0) -> SampleConfig:
    mode = "practical" if spec.sample_mode == "full" else spec.sample_mode
    return SampleConfig(spec.delta, spec.fail_prob, mode, seed=seed)


def run_variance(spec: ExperimentSpec) -> list[dict]:
    """Spread of (estimate - true ratio) over fresh samples and fixed viewpoints, pooled over seeds.

    The estimate is ``sample_estimate``, which equals ``approx_query`` on the
    same sample exactly, so no structures are built here.
    """
    rows = []
    for kind in spec.kinds:
        for n in spec.sizes:
            devs = []
            m = 0
            for seed in range(spec.seeds):
                scene = _scene(kind, n, seed)
                pts = take(probe_points(scene, seed, spec.grid), spec.viewpoints)
                vis = [visible_set(scene, p).visible for p in pts]
                truth = [Fraction(len(v), scene.n) for v in vis]
                for t in range(spec.trials):
                    if spec.sample_mode == "full":
                        sample = tuple(range(scene.n))
                    else:
                        m = _config(spec).sample_size(scene.n)
                        sample = draw_sample(scene, m, seed * 100003 + t)
                    m = len(sample)
                    for v, tr in zip(vis, truth):
                        est = Fraction(sum(1 for s in sample if s in v), m)
                        devs.append(est - tr)
            mean = sum(devs) / len(devs)
            sigma = statistics.pstdev([float(d - mean) for d in devs])
            rows.append({"kind": kind, "n": scene.n, "m": m, "trials": len(devs), "sigma": sigma})
    return rows


def run_memtime(spec: ExperimentSpec) -> list[dict]:
    """Structure size and query cost per ell policy; seed 0 scene and sample."""
    rows = []
    for kind in spec.kinds:
        for n in spec.sizes:
            scene = _scene(kind, n, 0)
            for policy in spec.ell_policies:
                ell = _ell(policy, scene.n)
                t0 = time.perf_counter()
                counter = build_approx_counter(scene, _config(spec), ell)
                build_ms = (time.perf_counter() - t0) * 1000.0
                it = probe_points(scene, 1, spec.grid)
                done, spent, locs = 0, 0.0, 0
                while done < spec.queries:
                    p = next(it)
                    t1 = time.perf_counter()
                    try:
                        approx_query(counter, p)
                    except BoundaryQueryError:
                        continue
                    spent += time.perf_counter() - t1
                    locs += counter.locations
                    done += 1
                rows.append({
                    "kind": kind, "n": scene.n, "ell": ell, "m": counter.m,
                    "edges": counter.edges, "faces": counter.faces,
                    "build_ms": build_ms, "query_us_mean": spent / done * 1e6,
                    "locations_per_query": Fraction(locs, done),
                })
    return rows


RUNNERS = {"counts": run_counts, "variance": run_variance, "memtime": run_memtime}


def _sort_key(row: dict):
    return tuple(row[k] for k in ("kind", "n", "seed", "ell") if k in row)


def to_csv(experiment: str, rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = SCHEMAS[experiment]
    w.writerow(cols)
    for r in sorted(rows, key=_sort_key):
        w.writerow([r[c] if isinstance(r[c], str) else _num(r[c]) for c in cols])
    return buf.getvalue()


def run_experiment(spec: ExperimentSpec, out: Optional[Path] = None) -> str:
    text = to_csv(spec.experiment, RUNNERS[spec.experiment](spec))
    if out is not None:
        Path(out).write_text(text, encoding="utf-8", newline="")
    return text


def read_csv(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
