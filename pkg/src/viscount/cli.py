"""Command-line front end: ``viscount <subcommand> ...``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .approx import SampleConfig, approx_query, build_approx_counter, resolve_ell
from .bench import ELL_POLICIES, ExperimentSpec, run_experiment
from .generators import KINDS, GenerationError, SceneGenSpec, generate
from .kernel import Point, format_rational, rational
from .scene import SceneError, read_scene, validate_nondegenerate, write_scene
from .visibility import (
    GeneralPositionError,
    ViewpointOnSegmentError,
    visibility_graph,
    visible_set,
    visible_set_oracle,
)
from .vsp import BoundaryQueryError, build_vsp, coarsen_vsp, relaxed_query, vsp_query


def _point(text: str) -> Point:
    try:
        x, y = text.split(",")
        return Point(rational(x.strip()), rational(y.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected X,Y with rational coordinates, got {text!r}") from exc


def _rat(text: str) -> Fraction:
    try:
        return rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(t) for t in text.split(",") if t.strip())


def _words(text: str) -> tuple[str, ...]:
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _ell(text: str):
    if text in ("1", "quarter_root", "sqrt"):
        return text
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("ell must be 1, quarter_root, sqrt or a positive integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("ell must be >= 1")
    return v


def _fmt(p: Point) -> str:
    return f"{format_rational(p.x)},{format_rational(p.y)}"


# ----------------------------------------------------------------- commands


def cmd_gen(a) -> int:
    scene, targets = generate(SceneGenSpec(a.kind, a.n, a.seed))
    write_scene(scene, a.out)
    print(f"wrote {scene.n} segments to {a.out}")
    return 0


def cmd_validate(a) -> int:
    scene = read_scene(a.file)
    rep = validate_nondegenerate(scene)
    if rep.ok:
        print(f"ok: {scene.n} segments, nondegenerate")
        return 0
    for i, j in rep.crossing_pairs:
        print(f"crossing segments {i} {j}")
    for t in rep.collinear_triples:
        print("collinear endpoints " + " ".join(map(str, t)))
    for l1, l2 in rep.parallel_endpoint_line_pairs:
        print(f"parallel endpoint lines {l1[0]}-{l1[1]} {l2[0]}-{l2[1]}")
    return 1


def cmd_count(a) -> int:
    scene = read_scene(a.file)
    p = Point(a.x, a.y)
    vs = (visible_set_oracle if a.oracle else visible_set)(scene, p)
    print(vs.count)
    print(" ".join(map(str, sorted(vs.visible))))
    return 0


def cmd_vgraph(a) -> int:
    scene = read_scene(a.file)
    g = visibility_graph(scene)
    if a.stats:
        print(f"vertices {g.n_vertices}")
        print(f"edges {g.m}")
        return 0
    for u, v in g.edges:
        print(u, v)
    return 0


def cmd_vsp(a) -> int:
    scene = read_scene(a.file)
    vsp = build_vsp(scene, a.mode, keep_drop_test=a.keep_drop_test)
    if a.stats or a.query is None:
        for key in ("V", "E", "F", "N", "N_sep", "curves"):
            print(f"{key} {vsp.stats[key]}")
        if a.stats:
            print(f"build_ms {vsp.stats['build_ms']:.1f}")
    if a.query is not None:
        print(vsp_query(vsp, a.query))
    return 0


def cmd_relax(a) -> int:
    scene = read_scene(a.file)
    rv = coarsen_vsp(build_vsp(scene, "pruned"), a.k)
    if a.query is None:
        print(f"k {rv.k}")
        print(f"kappa {rv.kappa}")
        print(f"N_sep {rv.n_sep}")
        print(f"kept {rv.size}")
        print(f"super_faces {rv.super_faces}")
    else:
        print(relaxed_query(rv, a.query))
    return 0


def cmd_approx(a) -> int:
    scene = read_scene(a.file)
    cfg = SampleConfig(a.delta, a.fail_prob, a.mode, seed=a.seed, C=a.C)
    counter = build_approx_counter(scene, cfg, resolve_ell(a.ell, scene.n))
    if a.query is None:
        print(f"m {counter.m}")
        print(f"distinct {len(counter.structures)}")
        print(f"ell {counter.ell}")
        print(f"edges {counter.edges}")
        print(f"faces {counter.faces}")
    else:
        r = approx_query(counter, a.query)
        print(f"{format_rational(r)} {float(r):.6f}")
    return 0


def cmd_bench(a) -> int:
    spec = ExperimentSpec(
        a.experiment, _words(a.kinds), _ints(a.sizes), a.seeds,
        ell_policies=_words(a.ell_policies), sample_mode=a.sample_mode,
    )
    run_experiment(spec, Path(a.out))
    print(f"wrote {a.out}")
    if not a.no_plot:
        from .plotting import plot_csv

        print(f"wrote {plot_csv(a.experiment, a.out)}")
    return 0


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="viscount", description="Exact and approximate visibility counting for segment scenes.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark scene")
    p.add_argument("--kind", required=True, choices=KINDS)
    p.add_argument("--n", required=True, type=int, help="segments (A/B/C), gaps (peephole) or k (shatter)")
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("validate", help="check a scene file for crossings and degeneracies")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("count", help="exact visibility count from one viewpoint")
    p.add_argument("file")
    p.add_argument("--x", required=True, type=_rat)
    p.add_argument("--y", required=True, type=_rat)
    p.add_argument("--oracle", action="store_true", help="use the brute-force oracle")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("vgraph", help="endpoint visibility graph")
    p.add_argument("file")
    p.add_argument("--stats", action="store_true")
    p.set_defaults(func=cmd_vgraph)

    p = sub.add_parser("vsp", help="visibility space partition")
    p.add_argument("file")
    p.add_argument("--mode", required=True, choices=("full", "pruned"))
    p.add_argument("--keep-drop-test", action="store_true")
    p.add_argument("--stats", action="store_true")
    p.add_argument("--query", type=_point)
    p.set_defaults(func=cmd_vsp)

    p = sub.add_parser("relax", help="k-relaxed partition")
    p.add_argument("file")
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--query", type=_point)
    p.set_defaults(func=cmd_relax)

    p = sub.add_parser("approx", help="sampled visibility ratio")
    p.add_argument("file")
    p.add_argument("--mode", required=True, choices=("chernoff", "vc", "practical"))
    p.add_argument("--delta", required=True, type=_rat)
    p.add_argument("--fail-prob", required=True, type=_rat)
    p.add_argument("--ell", required=True, type=_ell)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--C", type=_rat, default=Fraction(1, 4), help="constant of the vc sample size")
    p.add_argument("--query", type=_point)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("bench", help="run an experiment and write CSV plus a PNG figure")
    p.add_argument("--experiment", required=True, choices=("counts", "variance", "memtime"))
    p.add_argument("--kinds", required=True)
    p.add_argument("--sizes", required=True)
    p.add_argument("--seeds", required=True, type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--ell-policies", default=",".join(ELL_POLICIES))
    p.add_argument("--sample-mode", default="practical", choices=("chernoff", "vc", "practical", "full"))
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


ERRORS = (
    SceneError, GenerationError, ViewpointOnSegmentError, GeneralPositionError,
    BoundaryQueryError, ValueError, OSError,
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
