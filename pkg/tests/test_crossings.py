from __future__ import annotations

import numpy as np
import pytest

from linkframe import (DegeneracyError, PolygonalCurve, link_by_crossings, link_exact, link_numeric,
                       paper_example, polygonize, sample, signed_crossings)
from linkframe.crossings import MAX_ATTEMPTS, projection_directions

from helpers import random_disjoint_pair
from oracles import enumerate_crossings

SQUARE = np.array([[1, 1, 0], [-1, 1, 0], [-1, -1, 0], [1, -1, 0]], float)
HOPF_PARTNER = np.array([[2, 0, 1], [0, 0, 1], [0, 0, -1], [2, 0, -1]], float)


def _unit(rng):
    g = rng.normal(size=3)
    return g / np.linalg.norm(g)


def test_far_apart_squares_have_no_crossings():
    assert signed_crossings(PolygonalCurve(SQUARE), PolygonalCurve(SQUARE + [10, 0, 0])) == []


def test_skew_polygon_pair_generic_direction():
    pair = paper_example("framing_neg_two")
    cs = signed_crossings(pair.first, pair.second, (0.1, 0.2, 1.0))
    # As transcribed, four positive crossings (lk = +2).
    assert sum(c.sign for c in cs) == 4
    assert link_by_crossings(pair.first, pair.second).value == 2


def test_hopf_pair_two_equal_crossings(rng):
    A, B = PolygonalCurve(SQUARE), PolygonalCurve(HOPF_PARTNER)
    d = (0.1, 0.2, 1.0)
    cs = signed_crossings(A, B, d)
    assert len(cs) == 2 and cs[0].sign == cs[1].sign
    ref = enumerate_crossings(SQUARE, HOPF_PARTNER, d)
    assert sorted(s for *_, s in ref) == sorted(c.sign for c in cs)


def test_hopf_pair_default_direction_is_degenerate_then_retried():
    A, B = PolygonalCurve(SQUARE), PolygonalCurve(HOPF_PARTNER)
    with pytest.raises(DegeneracyError) as info:
        signed_crossings(A, B)
    assert info.value.feature is not None
    assert link_by_crossings(A, B).value == link_exact(A, B).rounded


def test_overlapping_projection_is_degenerate():
    A = PolygonalCurve(SQUARE)
    B = PolygonalCurve(SQUARE * [0.5, 1, 1] + [0, 0, 1])  # edges 0 and 2 project onto A's edges
    with pytest.raises(DegeneracyError):
        signed_crossings(A, B)


def test_vertex_on_edge_is_degenerate():
    A = PolygonalCurve(SQUARE)
    B = PolygonalCurve([[0, 1, 1], [0, 3, 1], [0.5, 3, 1]])  # vertex projects onto A's edge 0
    with pytest.raises(DegeneracyError):
        signed_crossings(A, B)


def test_matches_plain_loop_enumeration(rng):
    for _ in range(30):
        P, Q = random_disjoint_pair(rng)
        d = _unit(rng)
        ours = signed_crossings(P, Q, d)
        ref = enumerate_crossings(P.vertices, Q.vertices, d)
        assert len(ours) == len(ref)
        got = sorted((c.over_segment, c.under_segment, c.sign) if c.over == "first"
                     else (c.under_segment, c.over_segment, c.sign) for c in ours)
        assert got == sorted(ref)


def test_parity_and_direction_independence(rng):
    for _ in range(10):
        P, Q = random_disjoint_pair(rng)
        values = set()
        for _ in range(10):
            s = sum(c.sign for c in signed_crossings(P, Q, _unit(rng)))
            assert s % 2 == 0
            values.add(s // 2)
        assert len(values) == 1
        assert values == {link_by_crossings(P, Q).value}


def test_sampled_circles():
    z = paper_example("framing_zero")
    assert link_by_crossings(sample(z.first, 64), sample(z.second, 64)).value == 0
    h = paper_example("framing_one", 1.0)
    assert link_by_crossings(sample(h.first, 256), sample(h.second, 256)).value == 1


@pytest.mark.parametrize("example", ["framing_zero", "framing_one", "framing_neg_two"])
def test_three_way_agreement_on_paper_examples(example):
    pair = paper_example(example, 1.0)
    P, Q = polygonize(pair.first, 256), polygonize(pair.second, 256)
    c = link_by_crossings(P, Q)
    assert c.abs_error_bound == 0.0 and c.method == "crossing_oracle"
    assert c.rounded == link_exact(P, Q).rounded == link_numeric(pair).rounded


def test_retry_directions_are_seeded():
    a = [d for _, d in zip(range(5), projection_directions())]
    b = [d for _, d in zip(range(5), projection_directions())]
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(a[0], [0, 0, 1])


def test_all_attempts_degenerate_raises(monkeypatch):
    import linkframe.crossings as mod

    def always_degenerate(P, Q, direction=None):
        raise DegeneracyError("forced", feature=("edge", 0, "edge", 0))

    monkeypatch.setattr(mod, "signed_crossings", always_degenerate)
    with pytest.raises(DegeneracyError, match=str(MAX_ATTEMPTS)):
        mod.link_by_crossings(PolygonalCurve(SQUARE), PolygonalCurve(HOPF_PARTNER))


def test_bad_direction():
    from linkframe import InvalidArgumentError
    with pytest.raises(InvalidArgumentError):
        signed_crossings(PolygonalCurve(SQUARE), PolygonalCurve(HOPF_PARTNER), (0, 0, 0))
