import os
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from viscount.kernel import Point, Segment
from viscount.scene import Scene, segments_conflict, validate_nondegenerate

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SCENE3_COORDS = [((0, 0), (4, 0)), ((6, 1), (6, 5)), ((1, 6), (5, 6))]


def scene_of(rows) -> Scene:
    return Scene.from_coords([(a[0], a[1], b[0], b[1]) for a, b in rows])


@pytest.fixture
def scene3() -> Scene:
    return scene_of(SCENE3_COORDS)


coord = st.integers(-30, 30)


@st.composite
def points(draw, lo=-40, hi=40, denom=97):
    x = Fraction(draw(st.integers(lo * denom, hi * denom)), denom)
    y = Fraction(draw(st.integers(lo * denom, hi * denom)), denom)
    return Point(x, y)


@st.composite
def scenes(draw, max_n=6, nondegenerate=True):
    """Small scenes: segments are kept greedily when they conflict with nothing so far."""
    raw = draw(st.lists(st.tuples(coord, coord, coord, coord), min_size=1, max_size=max_n))
    kept = []
    for ax, ay, bx, by in raw:
        if (ax, ay) == (bx, by):
            continue
        s = Segment.of(ax, ay, bx, by)
        if all(not segments_conflict(s, t) for t in kept):
            kept.append(s)
    if not kept:
        kept = [Segment.of(0, 0, 1, 0)]
    sc = Scene.from_segments(kept)
    if nondegenerate and not validate_nondegenerate(sc).ok:
        from hypothesis import assume

        assume(False)
    return sc


# --------------------------------------------------------- acceptance report

ACCEPTANCE: dict = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[criterion] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
