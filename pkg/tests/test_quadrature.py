from __future__ import annotations

import math

import numpy as np
import pytest

from linkframe import (ConvergenceError, CurvePair, InvalidArgumentError, PolygonalCurve,
                       QuadratureConfig, SingularityError, circle, epsilon_sweep, link_exact,
                       link_numeric, linking_integrand, paper_example)
from linkframe.quadrature import pair_integrand

from helpers import random_disjoint_pair, random_rotation

COARSE = QuadratureConfig(panels_per_piece=2, nodes_per_panel=4, target_abs_error=1e-10)


# ------------------------------------------------------------ integrand

def test_integrand_parallel_tangents_vanish():
    assert linking_integrand([1, 0, 0], [0, 1, 0], [1, 0, 1], [0, 1, 0]) == 0.0


def test_integrand_unit_example():
    # (1,0,0) x (0,0,1) = (0,-1,0); dotted with x - y = (0,-1,0) gives +1 at unit distance.
    assert linking_integrand([0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]) == pytest.approx(1.0, abs=1e-15)


def test_integrand_broadcasts():
    x = np.zeros((4, 3))
    y = np.tile([0.0, 1.0, 0.0], (4, 1))
    out = linking_integrand(x, [1, 0, 0], y, [0, 0, 1])
    np.testing.assert_allclose(out, 1.0)


def test_integrand_singular():
    with pytest.raises(SingularityError):
        linking_integrand([1, 2, 3], [1, 0, 0], [1, 2, 3], [0, 1, 0])


def test_integrand_framing_zero_closed_form():
    pair = paper_example("framing_zero")
    t, s = math.pi / 2, 0.0
    expected = math.sin(t - s) / (3 - 2 * math.cos(t - s)) ** 1.5
    assert expected == pytest.approx(3 ** -1.5)
    assert pair_integrand(pair, t, s) * 4 * math.pi == pytest.approx(expected, abs=1e-15)


# ------------------------------------------------------------ config

@pytest.mark.parametrize("kwargs", [dict(panels_per_piece=0), dict(nodes_per_panel=1),
                                    dict(target_abs_error=0.0), dict(target_abs_error=0.5),
                                    dict(max_refinements=0), dict(max_evaluations=0)])
def test_config_validation(kwargs):
    with pytest.raises(InvalidArgumentError):
        QuadratureConfig(**kwargs)


def test_config_round_trip():
    cfg = QuadratureConfig(panels_per_piece=3, target_abs_error=1e-8)
    assert QuadratureConfig(**cfg.to_dict()) == cfg


# ------------------------------------------------------------ link_numeric

def test_framing_zero():
    est = link_numeric(paper_example("framing_zero"))
    assert abs(est.value) < 1e-9
    assert est.rounded == 0 and est.confident and est.method == "quadrature"


def test_framing_one():
    est = link_numeric(paper_example("framing_one", 1.0))
    assert est.rounded == 1 and est.confident
    assert abs(est.value - 1) <= est.abs_error_bound


def test_skew_square_pair_computed_value():
    # The skew squares as transcribed integrate to +2 (see README, "Acceptance suite").
    est = link_numeric(paper_example("framing_neg_two"))
    assert est.rounded == 2 and est.confident
    assert abs(est.value - 2) < 1e-9


@pytest.mark.parametrize("eps_list,expected", [([1.0], [1]), ([1.0, 0.5, 0.05], [1, 1, 1]), ([0.9999], [1])])
def test_epsilon_sweep(eps_list, expected):
    ests = epsilon_sweep(eps_list)
    assert [e.rounded for e in ests] == expected
    assert all(e.confident for e in ests)


def test_epsilon_sweep_rejects_bad_eps():
    with pytest.raises(InvalidArgumentError):
        epsilon_sweep([0.5, 1.5])


def test_touching_curves_raise_singularity():
    a = PolygonalCurve([[0, 0, 0], [2, 0, 0], [2, 2, 0], [0, 2, 0]])
    b = PolygonalCurve([[1, 0, 0], [1, 0, 3], [1, -3, 3]])  # shares the point (1,0,0)
    with pytest.raises(SingularityError):
        link_numeric(CurvePair(a, b))


def test_convergence_error_carries_estimate():
    cfg = QuadratureConfig(panels_per_piece=1, nodes_per_panel=2, target_abs_error=1e-14, max_refinements=2)
    with pytest.raises(ConvergenceError) as info:
        link_numeric(paper_example("framing_one", 0.05), cfg)
    est = info.value.estimate
    assert est is not None and est.method == "quadrature"
    assert est.abs_error_bound > 1e-14


def test_evaluation_cap_stops_refinement():
    cfg = QuadratureConfig(target_abs_error=1e-14, max_refinements=30, max_evaluations=20_000)
    with pytest.raises(ConvergenceError):
        link_numeric(paper_example("framing_one", 0.05), cfg)


@pytest.mark.parametrize("example", ["framing_zero", "framing_one", "framing_neg_two"])
def test_refinement_bound_is_monotone(example):
    est = link_numeric(paper_example(example, 1.0), COARSE)
    h = est.history
    # The smooth periodic framing_zero integrand converges at the first refinement.
    assert len(h) >= (1 if example == "framing_zero" else 3)
    assert all(b <= a for a, b in zip(h, h[1:])), h


def test_deterministic_for_fixed_config():
    pair = paper_example("framing_one", 0.1)
    a, b = link_numeric(pair), link_numeric(pair)
    assert a.value == b.value and a.abs_error_bound == b.abs_error_bound


def test_deterministic_across_thread_counts(monkeypatch, backend):
    pair = paper_example("framing_one", 0.5)
    vals = set()
    for threads in ("1", "4"):
        monkeypatch.setenv("LINKFRAME_THREADS", threads)
        vals.add(link_numeric(pair).value)
    assert len(vals) == 1


# ------------------------------------------------------------ invariances

def test_antisymmetry_symmetry_and_rigid_motion(rng):
    for _ in range(5):
        P, Q = random_disjoint_pair(rng)
        base = link_numeric(CurvePair(P, Q))
        rev = link_numeric(CurvePair(P, Q.reversed()))
        swp = link_numeric(CurvePair(Q, P))
        R = random_rotation(rng)
        off = rng.uniform(-3, 3, size=3)
        mov = link_numeric(CurvePair(P.transformed(R, off), Q.transformed(R, off)))
        tol = 2 * base.abs_error_bound
        assert abs(rev.value + base.value) <= tol + 2 * rev.abs_error_bound
        assert abs(swp.value - base.value) <= tol + 2 * swp.abs_error_bound
        assert abs(mov.value - base.value) <= tol + 2 * mov.abs_error_bound


def test_analytic_circles_match_polygon_limit():
    # A tilted Hopf pair of analytic circles against the exact value of fine polygons.
    a = circle((0, 0, 0), 1.0, (0, 0, 1))
    b = circle((1, 0, 0), 1.0, (0, 1, 0))
    est = link_numeric(CurvePair(a, b))
    assert est.confident and abs(est.rounded) == 1
    from linkframe import sample
    ex = link_exact(sample(a, 512), sample(b, 512))
    assert ex.rounded == est.rounded
