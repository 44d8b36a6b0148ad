"""Abelian Chern-Simons Wilson loop phase ``exp(2 pi i lk / k)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .curves import CurvePair, PolygonalCurve
from .errors import ConvergenceError, InvalidArgumentError
from .estimate import LinkEstimate
from .polygonal import link_exact
from .quadrature import QuadratureConfig, link_numeric


@dataclass(frozen=True)
class WilsonValue:
    re: float
    im: float
    level_k: int
    lk: int

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def to_dict(self) -> dict:
        return {"re": self.re, "im": self.im, "level_k": self.level_k, "lk": self.lk}


def _as_int(x, name: str) -> int:
    if isinstance(x, bool) or int(x) != x:
        raise InvalidArgumentError(f"{name} must be an integer, got {x!r}")
    return int(x)


def wilson_expectation(lk: int, k: int) -> WilsonValue:
    """Unit-modulus phase for linking number ``lk`` at level ``k``.

    ``lk`` is reduced modulo ``k`` to the symmetric range before any
    trigonometry, so the result is exactly periodic in ``lk`` and exactly
    conjugate under ``lk -> -lk``.
    """
    lk = _as_int(lk, "lk")
    k = _as_int(k, "k")
    if k == 0:
        raise InvalidArgumentError("level zero undefined")
    num, den = (lk, k) if k > 0 else (-lk, -k)
    r = num % den
    if 2 * r > den:
        r -= den
    a = abs(r)
    sign = 1.0 if r >= 0 else -1.0
    if a == 0:
        re, im = 1.0, 0.0
    elif 2 * a == den:
        re, im = -1.0, 0.0
    elif 4 * a == den:
        re, im = 0.0, 1.0
    else:
        angle = 2.0 * math.pi * a / den
        re, im = math.cos(angle), math.sin(angle)
    return WilsonValue(re, sign * im if im else 0.0, k, lk)


def best_link(pair: CurvePair, cfg: QuadratureConfig | None = None) -> LinkEstimate:
    """Closed form for polygons and piecewise-linear curves, quadrature otherwise."""
    first, second = pair.first, pair.second

    def linear(c) -> bool:
        return isinstance(c, PolygonalCurve) or c.is_piecewise_linear

    if linear(first) and linear(second):
        return link_exact(first, second)
    return link_numeric(pair, cfg)


def wilson_from_curves(pair: CurvePair, k: int, cfg: QuadratureConfig | None = None) -> WilsonValue:
    est = best_link(pair, cfg)
    if not est.confident:
        raise ConvergenceError("linking estimate is not a confident integer", estimate=est)
    return wilson_expectation(est.rounded, k)
