"""Numerical evaluation of the Gauss linking double integral.

Each pair of smooth pieces (one from each curve) is integrated with a
tensor-product Gauss-Legendre rule on a grid of panels. The grid is doubled
per piece pair until successive estimates agree; twice the last difference is
the reported error bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .curves import Curve, CurvePair, ParametricCurve, PolygonalCurve, min_separation, paper_example
from .errors import ConvergenceError, InvalidArgumentError, SingularityError
from .estimate import LinkEstimate

FOUR_PI = 4.0 * math.pi
SINGULAR_SEPARATION = 1e-12
# Added to each block's successive-difference bound; covers summation rounding.
BLOCK_ROUNDING = 1e-13


@dataclass(frozen=True)
class QuadratureConfig:
    panels_per_piece: int = 8
    nodes_per_panel: int = 8
    target_abs_error: float = 1e-6
    max_refinements: int = 6
    max_evaluations: int = 10_000_000

    def __post_init__(self):
        for name in ("panels_per_piece", "nodes_per_panel", "max_refinements", "max_evaluations"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < 1:
                raise InvalidArgumentError(f"{name} must be a positive integer, got {v!r}")
        if self.nodes_per_panel < 2:
            raise InvalidArgumentError("nodes_per_panel must be at least 2")
        if not (0.0 < self.target_abs_error < 0.5):
            raise InvalidArgumentError("target_abs_error must lie in (0, 0.5)")

    def to_dict(self) -> dict:
        return {
            "panels_per_piece": self.panels_per_piece,
            "nodes_per_panel": self.nodes_per_panel,
            "target_abs_error": self.target_abs_error,
            "max_refinements": self.max_refinements,
            "max_evaluations": self.max_evaluations,
        }


def linking_integrand(x, dx, y, dy):
    """``(dx x dy) . (x - y) / |x - y|^3``, without the 1/4pi prefactor.

    Broadcasts over leading axes. With this orientation the right-handed
    Hopf link integrates to +1.
    """
    x, dx, y, dy = (np.asarray(v, dtype=np.float64) for v in (x, dx, y, dy))
    r = x - y
    r2 = np.einsum("...k,...k->...", r, r)
    if np.any(r2 == 0):
        raise SingularityError("integrand evaluated at coincident points", distance=0.0)
    out = np.einsum("...k,...k->...", np.cross(dx, dy), r) / (r2 * np.sqrt(r2))
    return float(out) if out.ndim == 0 else out


def pair_integrand(pair: CurvePair, t, s):
    """Integrand of lk at parameters ``(t, s)`` including the 1/4pi prefactor."""
    a = _parametric(pair.first)
    b = _parametric(pair.second)
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    s = np.atleast_1d(np.asarray(s, dtype=np.float64))
    return linking_integrand(a.position(t), a.tangent(t), b.position(s), b.tangent(s)) / FOUR_PI


@lru_cache(maxsize=32)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _parametric(c: Curve) -> ParametricCurve:
    return c.as_parametric() if isinstance(c, PolygonalCurve) else c


class _PieceNodes:
    """Cached Gauss nodes for one piece at successive panel counts."""

    def __init__(self, piece, base_panels: int, order: int):
        self.piece = piece
        self.base_panels = base_panels
        self.order = order
        self._cache: dict[int, tuple] = {}

    def count(self, level: int) -> int:
        return self.base_panels * (2 ** level) * self.order

    def at(self, level: int):
        if level not in self._cache:
            panels = self.base_panels * (2 ** level)
            x, w = _legendre(self.order)
            edges = np.linspace(self.piece.start, self.piece.end, panels + 1)
            half = 0.5 * np.diff(edges)
            mid = 0.5 * (edges[1:] + edges[:-1])
            t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
            wt = (half[:, None] * w[None, :]).ravel()
            self._cache[level] = (self.piece.position(t), self.piece.tangent(t), wt)
        return self._cache[level]


def _base_panels(a: ParametricCurve, b: ParametricCurve, cfg: QuadratureConfig):
    shortest = min(p.length for p in a.pieces + b.pieces)

    def count(piece) -> int:
        return cfg.panels_per_piece * max(1, math.ceil(piece.length / shortest - 1e-9))

    return ([_PieceNodes(p, count(p), cfg.nodes_per_panel) for p in a.pieces],
            [_PieceNodes(p, count(p), cfg.nodes_per_panel) for p in b.pieces])


def _integrate_block(na: _PieceNodes, nb: _PieceNodes, level: int) -> float:
    X, DX, wx = na.at(level)
    Y, DY, wy = nb.at(level)
    total, low = kernels.gauss_sum(X, DX, wx, Y, DY, wy)
    if not low > SINGULAR_SEPARATION ** 2:
        raise SingularityError("curves touch at a quadrature node", distance=math.sqrt(low))
    return total / FOUR_PI


def link_numeric(pair: CurvePair, cfg: QuadratureConfig | None = None,
                 check_separation: bool = True) -> LinkEstimate:
    """Linking number of two disjoint closed curves by adaptive tensor Gauss quadrature."""
    cfg = cfg or QuadratureConfig()
    a = _parametric(pair.first)
    b = _parametric(pair.second)
    if check_separation:
        sep = min_separation(a, b)
        if not sep > SINGULAR_SEPARATION:
            raise SingularityError(f"curves are not disjoint (separation {sep:.3e})", distance=sep)
    nodes_a, nodes_b = _base_panels(a, b, cfg)
    blocks = [(na, nb) for na in nodes_a for nb in nodes_b]
    per_block_tol = cfg.target_abs_error / len(blocks)

    levels = [0] * len(blocks)
    values = [_integrate_block(na, nb, 0) for na, nb in blocks]
    bounds = [math.inf] * len(blocks)
    history: list[float] = []

    def evaluations(lv) -> int:
        return sum(na.count(l) * nb.count(l) for (na, nb), l in zip(blocks, lv))

    for _ in range(cfg.max_refinements):
        todo = [k for k in range(len(blocks)) if not bounds[k] <= per_block_tol]
        if not todo:
            break
        trial = list(levels)
        for k in todo:
            trial[k] += 1
        if evaluations(trial) > cfg.max_evaluations:
            break
        for k in todo:
            na, nb = blocks[k]
            new = _integrate_block(na, nb, trial[k])
            bounds[k] = 2.0 * abs(new - values[k]) + BLOCK_ROUNDING
            values[k] = new
        levels = trial
        history.append(math.fsum(bounds))

    value = math.fsum(values)
    bound = math.fsum(bounds)
    est = LinkEstimate.from_value(value, bound, "quadrature", tuple(history))
    if not bound <= cfg.target_abs_error:
        raise ConvergenceError(
            f"quadrature did not reach {cfg.target_abs_error:g} (bound {bound:.3e}) "
            f"within {cfg.max_refinements} refinements / {cfg.max_evaluations} evaluations",
            estimate=est,
        )
    return est


def epsilon_sweep(eps_list, cfg: QuadratureConfig | None = None) -> list[LinkEstimate]:
    """Quadrature linking number of the eps-Hopf pair for each eps."""
    return [link_numeric(paper_example("framing_one", eps), cfg) for eps in eps_list]
