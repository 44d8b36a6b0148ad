"""Framed curves (ribbons) and their framing numbers.

A framed curve is a closed base curve with a unit normal field; its push-off
``base + offset * normal`` is the second edge of the ribbon, and the framing
number is the linking number of the two edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .crossings import link_by_crossings
from .curves import (Curve, CurvePair, ParametricCurve, Piece, PolygonalCurve,
                     bounding_diameter, closure_check, min_separation, sample,
                     sample_parameters)
from .errors import ConvergenceError, InvalidArgumentError
from .estimate import LinkEstimate
from .polygonal import link_exact
from .quadrature import QuadratureConfig, link_numeric

NormalField = Callable[[np.ndarray], np.ndarray]

UNIT_TOL = 1e-9
PROBES = 512
DEFAULT_SAMPLES = 256
FRAMING_METHODS = ("exact", "quadrature", "crossings")


def _unit_tangent(base: ParametricCurve, t: np.ndarray) -> np.ndarray:
    d = base.tangent(t)
    return d / np.linalg.norm(d, axis=-1, keepdims=True)


@dataclass(frozen=True)
class FramedCurve:
    base: ParametricCurve
    normal_field: NormalField
    offset: float

    def __post_init__(self):
        base = self.base.as_parametric() if isinstance(self.base, PolygonalCurve) else self.base
        object.__setattr__(self, "base", base)
        if not (math.isfinite(self.offset) and self.offset > 0):
            raise InvalidArgumentError(f"offset must be positive, got {self.offset!r}")
        if not closure_check(base):
            raise InvalidArgumentError("base curve is not closed")
        t0, t1 = base.domain
        t = np.concatenate([sample_parameters(base, PROBES), [t1]])
        n = self.normal_field(t)
        if n.shape != (len(t), 3):
            raise InvalidArgumentError(f"normal field returned shape {n.shape}, expected {(len(t), 3)}")
        if np.max(np.abs(np.linalg.norm(n, axis=1) - 1.0)) > UNIT_TOL:
            raise InvalidArgumentError("normal field is not of unit length")
        if np.linalg.norm(n[0] - n[-1]) > UNIT_TOL:
            raise InvalidArgumentError(
                "normal field does not close up; only whole turns of twist are allowed")
        side = np.linalg.norm(np.cross(n, _unit_tangent(base, t)), axis=1)
        if np.min(side) < 1e-6:
            raise InvalidArgumentError("normal field is parallel to the tangent somewhere")
        sep = min_separation(base, self.pushoff())
        if not sep > 1e-12:
            raise InvalidArgumentError(f"push-off meets the base curve (separation {sep:.3e})")

    def normal_derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=np.float64)
        t0, t1 = self.base.domain
        h = 1e-6 * (t1 - t0)
        return (self.normal_field(t + h) - self.normal_field(t - h)) / (2 * h)

    def pushoff(self) -> ParametricCurve:
        """The second ribbon edge ``base(t) + offset * normal(t)``."""
        delta = self.offset

        def lift(piece: Piece) -> Piece:
            return Piece(
                piece.start, piece.end,
                lambda t, p=piece: p.position(t) + delta * self.normal_field(np.asarray(t, dtype=np.float64)),
                lambda t, p=piece: p.tangent(t) + delta * self.normal_derivative(t),
            )

        return ParametricCurve(tuple(lift(p) for p in self.base.pieces), (self.base.name or "C") + "'")

    def edges(self) -> CurvePair:
        return CurvePair(self.base, self.pushoff(), "ribbon")


def _plane_normal(base: ParametricCurve) -> np.ndarray:
    pts = base.position(sample_parameters(base, PROBES))
    centred = pts - pts.mean(axis=0)
    _, sv, vt = np.linalg.svd(centred, full_matrices=False)
    normal = vt[2]
    residual = float(np.max(np.abs(centred @ normal)))
    if residual > 1e-9 * max(1.0, bounding_diameter(base)):
        raise InvalidArgumentError(f"base curve is not planar (off-plane distance {residual:.3e})")
    if sv[1] <= 1e-12 * max(1.0, sv[0]):
        raise InvalidArgumentError("base curve is degenerate (collinear)")
    area = np.cross(pts, np.roll(pts, -1, axis=0)).sum(axis=0)
    if area.dot(normal) < 0:
        normal = -normal
    return normal


def default_offset(base: Curve) -> float:
    return 0.1 * bounding_diameter(base)


def blackboard_framing(base: Curve, offset: float | None = None) -> FramedCurve:
    """Constant normal perpendicular to the plane of a planar base curve."""
    if isinstance(base, PolygonalCurve):
        base = base.as_parametric()
    normal = _plane_normal(base)
    if offset is None:
        offset = default_offset(base)

    def field(t):
        return np.broadcast_to(normal, np.shape(t) + (3,)).copy()

    return FramedCurve(base, field, float(offset))


def _smoothstep(x):
    x = np.clip(x, 0.0, 1.0)
    return x * x * (3.0 - 2.0 * x)


def twist_profile(domain: tuple[float, float], profile: str = "uniform",
                  center: float | None = None, width: float | None = None):
    """Fraction of the full twist accumulated at parameter ``t`` (0 at start, 1 at end)."""
    t0, t1 = domain
    if profile == "uniform":
        return lambda t: (np.asarray(t, dtype=np.float64) - t0) / (t1 - t0)
    if profile == "window":
        if center is None or width is None or not width > 0:
            raise InvalidArgumentError("window profile needs center and a positive width")
        lo, hi = center - width / 2, center + width / 2
        if lo < t0 or hi > t1:
            raise InvalidArgumentError(f"twist window [{lo}, {hi}] leaves the domain [{t0}, {t1}]")
        return lambda t: _smoothstep((np.asarray(t, dtype=np.float64) - lo) / width)
    raise InvalidArgumentError(f"unknown twist profile {profile!r}")


def add_twists(f: FramedCurve, n: int, profile: str = "uniform",
               center: float | None = None, width: float | None = None) -> FramedCurve:
    """Rotate the normal field ``n`` full turns about the tangent.

    Positive ``n`` is a right-handed turn about the direction of travel and
    raises the framing number by ``n``.
    """
    if isinstance(n, bool) or int(n) != n:
        raise InvalidArgumentError(f"twists must be a whole number of turns, got {n!r}")
    n = int(n)
    if n == 0:
        return f
    frac = twist_profile(f.base.domain, profile, center, width)
    base, old = f.base, f.normal_field

    def field(t):
        t = np.asarray(t, dtype=np.float64)
        v = old(t)
        k = _unit_tangent(base, t)
        phi = (2.0 * math.pi * n * frac(t))[..., None]
        c, s = np.cos(phi), np.sin(phi)
        return v * c + np.cross(k, v) * s + k * np.einsum("...i,...i->...", k, v)[..., None] * (1 - c)

    return FramedCurve(base, field, f.offset)


def framing_number(f: FramedCurve, cfg: QuadratureConfig | None = None,
                   method: str = "exact", samples: int = DEFAULT_SAMPLES) -> LinkEstimate:
    """Linking number of the two ribbon edges.

    ``exact`` and ``crossings`` polygonize both edges at the same ``samples``
    parameter values; ``quadrature`` integrates the analytic edges.
    """
    if method == "quadrature":
        est = link_numeric(f.edges(), cfg)
    elif method in ("exact", "crossings"):
        P = sample(f.base, samples)
        Q = sample(f.pushoff(), samples)
        est = link_exact(P, Q) if method == "exact" else link_by_crossings(P, Q)
    else:
        raise InvalidArgumentError(f"unknown framing method {method!r}; choose from {FRAMING_METHODS}")
    if not est.confident:
        raise ConvergenceError("framing number is not a confident integer", estimate=est)
    return est


def twist_placement_invariance(f: FramedCurve, n: int, center: float, width: float,
                               cfg: QuadratureConfig | None = None, method: str = "exact",
                               samples: int = DEFAULT_SAMPLES) -> LinkEstimate:
    """Framing after ``n`` turns packed into a window, checked against the uniform spread."""
    localized = framing_number(add_twists(f, n, "window", center, width), cfg, method, samples)
    uniform = framing_number(add_twists(f, n), cfg, method, samples)
    if localized.rounded != uniform.rounded:
        raise ConvergenceError(
            f"localized twist gave {localized.rounded}, uniform twist gave {uniform.rounded}",
            estimate=localized)
    return localized
