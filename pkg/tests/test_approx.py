import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from viscount.approx import (
    ApproxCounter,
    SampleConfig,
    approx_query,
    build_approx_counter,
    build_target_structure,
    chernoff_sample_size,
    draw_sample,
    hit_sample_size,
    practical_sample_size,
    resolve_ell,
    sample_estimate,
    target_query,
    vc_sample_size,
)
from viscount.generators import SceneGenSpec, generate, generate_full
from viscount.kernel import Point, Segment
from viscount.scene import Scene
from viscount.visibility import CrossingTargetError, in_general_position, is_target_visible, visibility_count
from viscount.vsp import BoundaryQueryError

from conftest import scene_of

P = Point.of
F = Fraction


def _points(scene, k, seed, pad=2):
    rng = random.Random(seed)
    x0, y0, x1, y1 = scene.bbox
    out = []
    while len(out) < k:
        p = Point(x0 - pad + (x1 - x0 + 2 * pad) * F(rng.randrange(1, 2**20), 2**20),
                  y0 - pad + (y1 - y0 + 2 * pad) * F(rng.randrange(1, 2**20), 2**20))
        if in_general_position(scene, p):
            out.append(p)
    return out


# ------------------------------------------------------------ sample sizes


def test_chernoff_examples():
    assert chernoff_sample_size(0.5, 0.5) == 3
    assert chernoff_sample_size(F(1, 10), F(1, 20)) == 185
    # 2 e^-2 ~ 0.27 <= 0.5 already holds at m = 1
    assert chernoff_sample_size(0.99, 0.5) == 1


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_chernoff_is_smallest(d, p):
    m = chernoff_sample_size(d, p)
    assert 2 * math.exp(-2 * m * d * d) <= p
    if m > 1:
        assert 2 * math.exp(-2 * (m - 1) * d * d) > p


def test_vc_examples():
    assert vc_sample_size(256, 0.25, 0.1, C=1) == 3072
    assert vc_sample_size(1024, 0.1, 0.05) >= vc_sample_size(64, 0.1, 0.05)


def test_practical_and_hit_sizes():
    assert practical_sample_size(1024) == 1000
    assert practical_sample_size(64) == 360
    # D = 4 log2(256) = 32; max(16 log2 40, 1024 log2 1024)
    assert hit_sample_size(256, 0.25, 0.05) == 10240


@pytest.mark.parametrize("d,p", [(0, 0.5), (1, 0.5), (0.5, 0), (0.5, 1.5)])
def test_sizes_reject_bad_parameters(d, p):
    with pytest.raises(ValueError):
        chernoff_sample_size(d, p)


def test_sample_config_modes():
    assert SampleConfig(mode="paper_practical").mode == "practical"
    assert SampleConfig(mode="chernoff").sample_size(10**6) == 185
    assert SampleConfig(explicit_m=7).sample_size(10) == 7
    with pytest.raises(ValueError):
        SampleConfig(mode="exact")


def test_resolve_ell():
    assert [resolve_ell(p, 64) for p in ("1", "quarter_root", "sqrt", 5)] == [1, 3, 8, 5]
    assert resolve_ell("quarter_root", 16) == 2 and resolve_ell("sqrt", 17) == 5
    with pytest.raises(ValueError):
        resolve_ell(0, 4)


# ---------------------------------------------------------------- sampling


def test_draw_sample_basics():
    one = scene_of([((0, 0), (1, 0))])
    assert draw_sample(one, 5, 0) == (0,) * 5
    with pytest.raises(ValueError):
        draw_sample(one, 0, 0)
    sc, _ = generate(SceneGenSpec("A", 16, 1))
    assert draw_sample(sc, 50, 9) == draw_sample(sc, 50, 9)
    assert draw_sample(sc, 50, 9) != draw_sample(sc, 50, 10)


def test_sample_estimate_identities(scene3):
    p = P(3, -5)
    assert sample_estimate(scene3, (0, 1, 2), p) == F(visibility_count(scene3, p), 3)
    assert sample_estimate(scene3, (2, 2, 0), p) == F(1, 3)
    assert sample_estimate(scene_of([((0, 0), (1, 0))]), (0, 0), P(4, 4)) == 1


def test_estimator_unbiased():
    sc, _ = generate(SceneGenSpec("A", 36, 2))
    p = _points(sc, 1, 5)[0]
    truth = F(visibility_count(sc, p), sc.n)
    ests = [float(sample_estimate(sc, draw_sample(sc, 40, s), p)) for s in range(300)]
    mean = sum(ests) / len(ests)
    sd = (sum((e - mean) ** 2 for e in ests) / len(ests)) ** 0.5
    assert abs(mean - float(truth)) <= 3 * sd / len(ests) ** 0.5 + 1e-12


# -------------------------------------------------------- target structure


def test_empty_occluders_all_visible():
    t = Segment.of(0, 0, 3, 1)
    ts = build_target_structure(Scene(()), t, 3)
    assert len(ts.pieces) == 3
    assert all(all(lab) for lab in ts.labels)
    assert target_query(ts, P(10, -4))


def test_ell_one_single_location(scene3):
    ts = build_target_structure(scene3, scene3[2], 1)
    assert len(ts.arrangements) == 1
    c = [0]
    assert target_query(ts, P(3, 3), c) is True and c == [1]
    assert target_query(ts, P(3, -5)) is False


def test_external_target(scene3):
    t = Segment.of(10, 0, 11, 7)
    ts = build_target_structure(scene3, t, 2)
    assert ts.target_id is None
    for p in _points(scene3, 50, 3):
        assert target_query(ts, p) == is_target_visible(scene3, p, t)
    with pytest.raises(CrossingTargetError):
        build_target_structure(scene3, Segment.of(2, -1, 2, 1), 1)


@pytest.mark.parametrize("cut_rays", [False, True])
def test_ell_invariance(cut_rays):
    sc, _ = generate(SceneGenSpec("C", 9, 4))
    n = sc.n
    pts = _points(sc, 150, 8)
    for tid in (0, 5):
        occ = sc.without(tid)
        structs = [build_target_structure(sc, sc[tid], ell, cut_rays=cut_rays) for ell in (1, 3, n)]
        for s in structs:
            budget = -(-s.lines_total // s.ell)
            assert all(c <= budget for c in s.lines_hitting)
        for p in pts:
            want = is_target_visible(occ, p, sc[tid])
            got = []
            for s in structs:
                c = [0]
                got.append(target_query(s, p, c))
                assert c[0] == s.ell
            assert got == [want] * 3


def test_full_candidates_match():
    sc, _ = generate(SceneGenSpec("A", 9, 1))
    ts = build_target_structure(sc, sc[4], 2, candidates="full")
    for p in _points(sc, 100, 4):
        assert target_query(ts, p) == is_target_visible(sc.without(4), p, sc[4])
    with pytest.raises(ValueError):
        build_target_structure(sc, sc[4], 2, candidates="some")


def test_peephole_structure():
    g = generate_full(SceneGenSpec("peephole", 2, 0))
    t = g.targets[0]
    ts = build_target_structure(g.scene, g.scene[t], 2)
    assert target_query(ts, g.probes["visible"])
    assert not target_query(ts, g.probes["hidden"])


def test_boundary_query_error(scene3):
    ts = build_target_structure(scene3, scene3[2], 1)
    with pytest.raises(BoundaryQueryError):
        target_query(ts, P(2, 0))  # on an occluder


# ----------------------------------------------------------------- counter


def test_single_segment_counter():
    sc = scene_of([((0, 0), (1, 0))])
    c = build_approx_counter(sc, SampleConfig(explicit_m=4), 1)
    assert c.sample == (0, 0, 0, 0) and len(c.structures) == 1
    assert approx_query(c, P(5, 5)) == 1 and c.locations == 4


def test_counter_matches_sample_estimate():
    sc, _ = generate(SceneGenSpec("A", 9, 6))
    cfg = SampleConfig(explicit_m=12, seed=3)
    c = build_approx_counter(sc, cfg, "sqrt")
    assert isinstance(c, ApproxCounter) and c.ell == 3
    assert sum(c.multiplicity.values()) == 12 and set(c.multiplicity) == set(c.structures)
    for p in _points(sc, 60, 11):
        assert approx_query(c, p) == sample_estimate(sc, c.sample, p)
        assert c.locations == c.ell * c.m


def test_whole_scene_sample_is_exact(scene3):
    c = build_approx_counter(scene3, SampleConfig(), 2, sample=range(3))
    for p in (P(3, 3), P(3, -5), P(-7, 2)):
        assert approx_query(c, p) == F(visibility_count(scene3, p), 3)
    with pytest.raises(ValueError):
        build_approx_counter(scene3, SampleConfig(), 1, sample=[3])
