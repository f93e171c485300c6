import random
from fractions import Fraction

import pytest

from viscount.generators import SceneGenSpec, generate
from viscount.kernel import Point, Ray, Segment
from viscount.visibility import in_general_position, visibility_count, visibility_graph
from viscount.vsp import (
    BoundaryQueryError,
    build_vsp,
    candidate_lines_full,
    candidate_pieces_pruned,
    coarsen_vsp,
    relaxed_query,
    vsp_query,
)

from conftest import scene_of

P = Point.of
F = Fraction


def _random_points(scene, k, seed):
    rng = random.Random(seed)
    x0, y0, x1, y1 = scene.bbox
    out = []
    while len(out) < k:
        p = Point(x0 - 2 + (x1 - x0 + 4) * F(rng.randrange(10**6), 10**6),
                  y0 - 2 + (y1 - y0 + 4) * F(rng.randrange(10**6), 10**6))
        if in_general_position(scene, p):
            out.append(p)
    return out


@pytest.fixture(scope="module")
def scene3_vsps():
    from conftest import SCENE3_COORDS

    sc = scene_of(SCENE3_COORDS)
    return sc, {
        "full": build_vsp(sc, "full"),
        "pruned": build_vsp(sc, "pruned"),
        "kd": build_vsp(sc, "pruned", keep_drop_test=True),
    }


def test_candidate_line_counts(scene3):
    assert len(candidate_lines_full(scene_of([((0, 0), (1, 0))]))) == 1
    assert len(candidate_lines_full(scene_of([((0, 0), (1, 2)), ((3, 1), (5, 7))]))) == 6
    assert len(candidate_lines_full(scene3)) == 15


def test_pruned_single_segment():
    pcs = candidate_pieces_pruned(scene_of([((0, 0), (1, 0))]))
    kinds = sorted(type(c).__name__ for c in pcs.curves)
    assert kinds == ["Ray", "Ray", "Segment"]


def test_pruned_ray_cut_at_blocker():
    sc = scene_of([((0, 0), (-1, 2)), ((2, 1), (3, -1)), ((6, 0), (7, 6))])
    pcs = candidate_pieces_pruned(sc)
    beyond = [p for p in pcs.pieces if p.pair == (0, 2) and isinstance(p.curve, Segment) and p.curve.a == P(2, 1)]
    assert len(beyond) == 1
    assert beyond[0].cut == beyond[0].curve.b
    hit = beyond[0].cut
    assert (hit.x - 2) * 1 == (hit.y - 1) * 2  # on the pair's line
    assert 6 <= hit.x <= 7
    assert not any(isinstance(p.curve, Ray) and p.curve.origin == P(2, 1) and p.pair == (0, 2) for p in pcs.pieces)


def test_pruned_piece_budget(scene3):
    m = visibility_graph(scene3).m
    assert len(candidate_pieces_pruned(scene3)) <= 2 * m + scene3.n


def test_scene3_counts(scene3_vsps):
    sc, vs = scene3_vsps
    for v in vs.values():
        assert set(v.counts) <= {1, 2, 3}
        assert 3 in v.counts and min(v.counts) < 3
        assert vsp_query(v, P(3, 3)) == 3
        assert vsp_query(v, P(3, -5)) == 2


def test_face_constancy(scene3_vsps):
    sc, vs = scene3_vsps
    v = vs["full"]
    for f in range(v.subdivision.face_count):
        for p in v.subdivision.interior_samples(f, 5):
            assert visibility_count(sc, p) == v.counts[f]


def test_modes_agree_with_sweep(scene3_vsps):
    sc, vs = scene3_vsps
    for p in _random_points(sc, 300, 1):
        want = visibility_count(sc, p)
        for v in vs.values():
            assert vsp_query(v, p) == want


def test_keep_drop_shrinks(scene3_vsps):
    _, vs = scene3_vsps
    assert vs["kd"].stats["E"] <= vs["pruned"].stats["E"]
    assert vs["pruned"].N <= vs["full"].N


def test_boundary_query_rejected(scene3_vsps):
    _, vs = scene3_vsps
    with pytest.raises(BoundaryQueryError):
        vsp_query(vs["full"], Point(F(3), F(1, 2)))  # midpoint of (0,0) and (6,1)


def test_single_segment_everywhere_one():
    sc = scene_of([((0, 0), (1, 0))])
    v = build_vsp(sc, "pruned")
    assert set(v.counts) == {1}
    assert vsp_query(v, P(5, 5)) == 1


def test_unknown_mode():
    with pytest.raises(ValueError):
        build_vsp(scene_of([((0, 0), (1, 0))]), "fast")


def test_random_a_scene_modes_agree():
    sc, _ = generate(SceneGenSpec("A", 4, 3))
    full, pruned = build_vsp(sc, "full"), build_vsp(sc, "pruned")
    for p in _random_points(sc, 300, 2):
        assert vsp_query(full, p) == vsp_query(pruned, p) == visibility_count(sc, p)


# ------------------------------------------------------------------ relax


def test_k0_is_identity(scene3_vsps):
    sc, vs = scene3_vsps
    v = vs["full"]
    rv = coarsen_vsp(v, 0)
    assert rv.size == rv.n_sep == len(v.separating_edges())
    for f, p in enumerate(v.subdivision.representative_points):
        assert relaxed_query(rv, p) == v.counts[f]


def test_large_k_drops_everything(scene3_vsps):
    _, vs = scene3_vsps
    v = vs["full"]
    rv = coarsen_vsp(v, max(v.counts) - min(v.counts))
    assert rv.size == 0
    assert rv.super_faces == 1
    assert relaxed_query(rv, P(3, 3)) == relaxed_query(rv, P(100, -7))


@pytest.mark.parametrize("k", [0, 1, 2])
def test_relaxed_error_and_size(scene3_vsps, k):
    sc, vs = scene3_vsps
    for v in (vs["full"], vs["pruned"]):
        rv = coarsen_vsp(v, k)
        assert rv.size <= rv.n_sep // (k + 1)
        for p in _random_points(sc, 200, 10 + k):
            assert abs(relaxed_query(rv, p) - visibility_count(sc, p)) <= k


def test_negative_k_rejected(scene3_vsps):
    with pytest.raises(ValueError):
        coarsen_vsp(scene3_vsps[1]["full"], -1)
