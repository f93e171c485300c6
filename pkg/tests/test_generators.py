import pytest

from viscount.generators import SceneGenSpec, generate, generate_full
from viscount.scene import save_scene, validate_nondegenerate
from viscount.visibility import visible_set_oracle


def test_a_one_segment_per_cell():
    sc, _ = generate(SceneGenSpec("A", 4, 1))
    assert sc.n == 4
    cells = {(int(min(s.a.x, s.b.x)), int(min(s.a.y, s.b.y))) for s in sc.segments}
    assert cells == {(0, 0), (0, 1), (1, 0), (1, 1)}
    for s in sc.segments:
        assert int(max(s.a.x, s.b.x)) == int(min(s.a.x, s.b.x))
        assert int(max(s.a.y, s.b.y)) == int(min(s.a.y, s.b.y))


def test_shatter_size():
    for k in (1, 2, 3, 4):
        sc, targets = generate(SceneGenSpec("shatter", k, 0))
        assert sc.n == k + 2**k * k // 2
        assert targets == list(range(k))


def test_shatter_realizes_every_subset():
    g = generate_full(SceneGenSpec("shatter", 3, 0))
    seen = set()
    for j, p in g.probes.items():
        vis = visible_set_oracle(g.scene, p).visible
        subset = frozenset(t for t in g.targets if t in vis)
        assert subset == frozenset(t for t in g.targets if j >> t & 1)
        seen.add(subset)
    assert len(seen) == 8


def test_peephole_gaps_and_probes():
    g = generate_full(SceneGenSpec("peephole", 3, 0))
    assert g.scene.n == 2 * 4 + 1  # two fences of g + 1 pieces and the target
    t = g.targets[0]
    assert t in visible_set_oracle(g.scene, g.probes["visible"]).visible
    assert t not in visible_set_oracle(g.scene, g.probes["hidden"]).visible


@pytest.mark.parametrize("kind,size", [("A", 16), ("B", 16), ("C", 16), ("peephole", 2), ("shatter", 2)])
def test_deterministic_and_nondegenerate(kind, size):
    a, _ = generate(SceneGenSpec(kind, size, 7))
    b, _ = generate(SceneGenSpec(kind, size, 7))
    assert save_scene(a) == save_scene(b)
    assert validate_nondegenerate(a).ok


def test_seeds_differ():
    a, _ = generate(SceneGenSpec("A", 16, 1))
    b, _ = generate(SceneGenSpec("A", 16, 2))
    assert save_scene(a) != save_scene(b)


def test_b_segments_longer_than_c():
    b, _ = generate(SceneGenSpec("B", 25, 3))
    c, _ = generate(SceneGenSpec("C", 25, 3))

    def total(sc):
        return sum(float((s.a.x - s.b.x) ** 2 + (s.a.y - s.b.y) ** 2) ** 0.5 for s in sc.segments)

    assert total(c) == pytest.approx(total(b) / 2, rel=0.01)


@pytest.mark.parametrize(
    "kind,size,seed",
    [("D", 4, 0), ("A", 0, 0), ("peephole", 1, 0), ("shatter", 17, 0), ("A", 4, -1), ("A", 4, 2**64)],
)
def test_invalid_specs(kind, size, seed):
    with pytest.raises(ValueError):
        SceneGenSpec(kind, size, seed)
