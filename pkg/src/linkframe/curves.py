"""Closed space curves: analytic (piecewise smooth) and polygonal.

Curves are immutable. Analytic curves are built from :class:`Piece` objects
whose position and tangent maps are vectorized over a 1-D parameter array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import cKDTree

from . import kernels
from .errors import InvalidArgumentError

VecFn = Callable[[np.ndarray], np.ndarray]

CLOSURE_TOL = 1e-9

PAPER_EXAMPLES = ("framing_zero", "framing_one", "framing_neg_two")


def _as_points(a) -> np.ndarray:
    arr = np.array(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidArgumentError(f"expected an (n, 3) array of points, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class Piece:
    """One smooth piece ``t in [start, end]`` of a parametric curve."""

    start: float
    end: float
    position: VecFn
    tangent: VecFn
    linear: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.end)) or self.end <= self.start:
            raise InvalidArgumentError(f"bad piece interval [{self.start}, {self.end}]")

    @property
    def length(self) -> float:
        return self.end - self.start


def _components(fx, fy, fz) -> VecFn:
    def f(t):
        t = np.asarray(t, dtype=np.float64)
        return np.stack(np.broadcast_arrays(fx(t), fy(t), fz(t)), axis=-1).astype(np.float64)
    return f


def line_piece(p, q, start: float = 0.0, end: float = 1.0) -> Piece:
    """Straight piece running from ``p`` at ``start`` to ``q`` at ``end``."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != (3,) or q.shape != (3,):
        raise InvalidArgumentError("line endpoints must be 3-vectors")
    span = float(end) - float(start)
    if not span > 0:
        raise InvalidArgumentError(f"bad piece interval [{start}, {end}]")
    vel = (q - p) / span

    def pos(t):
        t = np.asarray(t, dtype=np.float64)
        return p + (t - start)[..., None] * vel

    def tan(t):
        t = np.asarray(t, dtype=np.float64)
        return np.broadcast_to(vel, t.shape + (3,)).copy()

    return Piece(float(start), float(end), pos, tan, linear=True)


@dataclass(frozen=True)
class ParametricCurve:
    """Piecewise-smooth curve; orientation follows increasing parameter."""

    pieces: tuple[Piece, ...]
    name: str = ""
    _breaks: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pieces = tuple(self.pieces)
        if not pieces:
            raise InvalidArgumentError("a curve needs at least one piece")
        for left, right in zip(pieces, pieces[1:]):
            if abs(left.end - right.start) > 1e-12 * max(1.0, abs(left.end)):
                raise InvalidArgumentError(
                    f"piece intervals are not contiguous: {left.end} then {right.start}")
        object.__setattr__(self, "pieces", pieces)
        object.__setattr__(self, "_breaks", np.array([p.start for p in pieces] + [pieces[-1].end]))

    @property
    def domain(self) -> tuple[float, float]:
        return self.pieces[0].start, self.pieces[-1].end

    @property
    def is_piecewise_linear(self) -> bool:
        return all(p.linear for p in self.pieces)

    def piece_index(self, t) -> np.ndarray:
        idx = np.searchsorted(self._breaks, np.asarray(t, dtype=np.float64), side="right") - 1
        return np.clip(idx, 0, len(self.pieces) - 1)

    def _evaluate(self, t, which: str) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        if len(self.pieces) == 1:
            return getattr(self.pieces[0], which)(t)
        out = np.empty(t.shape + (3,))
        idx = self.piece_index(t)
        for k in np.unique(idx):
            mask = idx == k
            out[mask] = getattr(self.pieces[k], which)(t[mask])
        return out

    def position(self, t) -> np.ndarray:
        return self._evaluate(t, "position")

    def tangent(self, t) -> np.ndarray:
        return self._evaluate(t, "tangent")

    def start_point(self) -> np.ndarray:
        return self.pieces[0].position(np.array([self.pieces[0].start]))[0]

    def vertices(self) -> np.ndarray:
        """Start points of each piece (the polygon vertices of a piecewise-linear curve)."""
        return np.array([p.position(np.array([p.start]))[0] for p in self.pieces])

    def reversed(self) -> "ParametricCurve":
        def flip(piece: Piece) -> Piece:
            pos, tan = piece.position, piece.tangent
            return Piece(-piece.end, -piece.start,
                         lambda t, pos=pos: pos(-np.asarray(t, dtype=np.float64)),
                         lambda t, tan=tan: -tan(-np.asarray(t, dtype=np.float64)),
                         piece.linear)
        return ParametricCurve(tuple(flip(p) for p in reversed(self.pieces)), self.name)

    def transformed(self, matrix=None, offset=None) -> "ParametricCurve":
        """Apply ``x -> matrix @ x + offset`` to every point."""
        M = np.eye(3) if matrix is None else np.asarray(matrix, dtype=np.float64)
        b = np.zeros(3) if offset is None else np.asarray(offset, dtype=np.float64)

        def move(piece: Piece) -> Piece:
            pos, tan = piece.position, piece.tangent
            return Piece(piece.start, piece.end,
                         lambda t, pos=pos: pos(t) @ M.T + b,
                         lambda t, tan=tan: tan(t) @ M.T,
                         piece.linear)
        return ParametricCurve(tuple(move(p) for p in self.pieces), self.name)


@dataclass(frozen=True)
class PolygonalCurve:
    """Closed polygon; the last vertex connects back to the first."""

    vertices: np.ndarray
    name: str = ""

    def __post_init__(self):
        v = _as_points(self.vertices)
        if len(v) < 3:
            raise InvalidArgumentError(f"a polygon needs at least 3 vertices, got {len(v)}")
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("polygon vertices must be finite")
        seg = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        if np.any(seg == 0):
            bad = int(np.flatnonzero(seg == 0)[0])
            raise InvalidArgumentError(f"zero-length segment after vertex {bad}")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @property
    def n_segments(self) -> int:
        return len(self.vertices)

    def segment(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.vertices[i], self.vertices[(i + 1) % len(self.vertices)]

    def reversed(self) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices[::-1].copy(), self.name)

    def transformed(self, matrix=None, offset=None) -> "PolygonalCurve":
        M = np.eye(3) if matrix is None else np.asarray(matrix, dtype=np.float64)
        b = np.zeros(3) if offset is None else np.asarray(offset, dtype=np.float64)
        return PolygonalCurve(self.vertices @ M.T + b, self.name)

    def with_midpoint(self, i: int) -> "PolygonalCurve":
        """Split segment ``i`` at its midpoint (same point set, one more vertex)."""
        a, b = self.segment(i)
        v = np.insert(np.asarray(self.vertices), i + 1, 0.5 * (a + b), axis=0)
        return PolygonalCurve(v, self.name)

    def as_parametric(self) -> ParametricCurve:
        n = len(self.vertices)
        pieces = tuple(line_piece(self.vertices[i], self.vertices[(i + 1) % n], float(i), float(i + 1))
                       for i in range(n))
        return ParametricCurve(pieces, self.name)


Curve = Union[ParametricCurve, PolygonalCurve]


@dataclass(frozen=True)
class CurvePair:
    first: Curve
    second: Curve
    label: str = ""

    def reversed_second(self) -> "CurvePair":
        return CurvePair(self.first, self.second.reversed(), self.label)

    def swapped(self) -> "CurvePair":
        return CurvePair(self.second, self.first, self.label)

    def transformed(self, matrix=None, offset=None) -> "CurvePair":
        return CurvePair(self.first.transformed(matrix, offset),
                         self.second.transformed(matrix, offset), self.label)


# ---------------------------------------------------------------- builders

def _plane_basis(normal) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    n = np.asarray(normal, dtype=np.float64)
    norm = np.linalg.norm(n)
    if not norm > 0:
        raise InvalidArgumentError("normal must be nonzero")
    n = n / norm
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = helper - helper.dot(n) * n
    u /= np.linalg.norm(u)
    return u, np.cross(n, u), n


def circle(center=(0.0, 0.0, 0.0), radius: float = 1.0, normal=(0.0, 0.0, 1.0),
           phase: float = 0.0, name: str = "") -> ParametricCurve:
    """Circle on ``t in [0, 2pi]``, counter-clockwise seen from the tip of ``normal``."""
    if not radius > 0:
        raise InvalidArgumentError("radius must be positive")
    c = np.asarray(center, dtype=np.float64)
    u, v, _ = _plane_basis(normal)
    r = float(radius)

    def pos(t):
        a = np.asarray(t, dtype=np.float64)[..., None] + phase
        return c + r * (np.cos(a) * u + np.sin(a) * v)

    def tan(t):
        a = np.asarray(t, dtype=np.float64)[..., None] + phase
        return r * (-np.sin(a) * u + np.cos(a) * v)

    return ParametricCurve((Piece(0.0, 2 * math.pi, pos, tan),), name)


def piecewise_linear(points, name: str = "") -> ParametricCurve:
    """Closed piecewise-linear parametric curve through ``points`` (pieces on [i, i+1])."""
    return PolygonalCurve(_as_points(points), name).as_parametric()


def _framing_zero() -> CurvePair:
    c = ParametricCurve((Piece(0.0, 2 * math.pi,
                               _components(np.cos, np.sin, lambda t: 0.0 * t),
                               _components(lambda t: -np.sin(t), np.cos, lambda t: 0.0 * t)),), "C")
    cp = ParametricCurve((Piece(0.0, 2 * math.pi,
                                _components(np.cos, np.sin, lambda t: 1.0 + 0.0 * t),
                                _components(lambda t: -np.sin(t), np.cos, lambda t: 0.0 * t)),), "C'")
    return CurvePair(c, cp, "framing_zero")


def _framing_one(eps: float) -> CurvePair:
    span = math.pi / eps
    c = ParametricCurve((Piece(
        -span, span,
        _components(lambda t: np.sin(eps * t), lambda t: np.cos(eps * t), lambda t: 0.0 * t),
        _components(lambda t: eps * np.cos(eps * t), lambda t: -eps * np.sin(eps * t), lambda t: 0.0 * t),
    ),), "C")
    cp = ParametricCurve((Piece(
        -math.pi, math.pi,
        _components(lambda s: 0.0 * s, lambda s: eps * np.cos(s) + 1.0, lambda s: eps * np.sin(s)),
        _components(lambda s: 0.0 * s, lambda s: -eps * np.sin(s), lambda s: eps * np.cos(s)),
    ),), "C'")
    return CurvePair(c, cp, f"framing_one(eps={eps!r})")


def _row(start, end, fx, fy, fz, vel) -> Piece:
    vel = np.asarray(vel, dtype=np.float64)
    return Piece(float(start), float(end), _components(fx, fy, fz),
                 lambda t: np.broadcast_to(vel, np.shape(t) + (3,)).copy(), linear=True)


def _framing_neg_two() -> CurvePair:
    # Case rows as printed, one Piece per row.
    c = ParametricCurve((
        _row(0, 4, lambda t: -1.0 + 0 * t, lambda t: t - 2, lambda t: t / 2 - 1, (0, 1, 0.5)),
        _row(4, 6, lambda t: t - 5, lambda t: 2.0 + 0 * t, lambda t: -t + 5, (1, 0, -1)),
        _row(6, 10, lambda t: 1.0 + 0 * t, lambda t: -t + 8, lambda t: t / 2 - 4, (0, -1, 0.5)),
        _row(10, 12, lambda t: 11 - t, lambda t: -2.0 + 0 * t, lambda t: 11 - t, (-1, 0, -1)),
    ), "C")
    cp = ParametricCurve((
        _row(0, 4, lambda t: 2 - t, lambda t: 1.0 + 0 * t, lambda t: 1 - t / 2, (-1, 0, -0.5)),
        _row(4, 6, lambda t: -2.0 + 0 * t, lambda t: 5 - t, lambda t: -5 + t, (0, -1, 1)),
        _row(6, 10, lambda t: -8 + t, lambda t: -1.0 + 0 * t, lambda t: 4 - t / 2, (1, 0, -0.5)),
        _row(10, 12, lambda t: 2.0 + 0 * t, lambda t: -11 + t, lambda t: -11 + t, (0, 1, 1)),
    ), "C'")
    return CurvePair(c, cp, "framing_neg_two")


def paper_example(example_id: str, epsilon: float = 1.0) -> CurvePair:
    """The three worked curve pairs: blackboard circles, the eps-Hopf link, the skew squares."""
    if example_id == "framing_zero":
        return _framing_zero()
    if example_id == "framing_one":
        eps = float(epsilon)
        if not (0.0 < eps <= 1.0):
            raise InvalidArgumentError(f"epsilon must lie in (0, 1], got {epsilon!r}")
        return _framing_one(eps)
    if example_id == "framing_neg_two":
        return _framing_neg_two()
    raise InvalidArgumentError(f"unknown example {example_id!r}; choose from {', '.join(PAPER_EXAMPLES)}")


# -------------------------------------------------------------- operations

def closure_check(curve: Curve, tol: float = CLOSURE_TOL) -> bool:
    """True iff every inter-piece gap and the end-to-start gap are within ``tol``."""
    if not tol > 0:
        raise InvalidArgumentError("tol must be positive")
    if isinstance(curve, PolygonalCurve):
        return True
    pieces = curve.pieces
    for left, right in zip(pieces, pieces[1:] + pieces[:1]):
        a = left.position(np.array([left.end]))[0]
        b = right.position(np.array([right.start]))[0]
        if not np.linalg.norm(a - b) <= tol:
            return False
    return True


def require_closed(curve: Curve, tol: float = CLOSURE_TOL) -> None:
    if not closure_check(curve, tol):
        raise InvalidArgumentError(f"curve {curve.name or '<unnamed>'} is not closed within {tol}")


def tangent_residual(curve: ParametricCurve, probes_per_piece: int = 7, h: float = 1e-5) -> float:
    """Largest relative mismatch between the tangent map and central differences of position."""
    worst = 0.0
    for piece in curve.pieces:
        step = h * max(1.0, piece.length)
        t = np.linspace(piece.start + 2 * step, piece.end - 2 * step, probes_per_piece)
        fd = (piece.position(t + step) - piece.position(t - step)) / (2 * step)
        an = piece.tangent(t)
        scale = np.maximum(np.linalg.norm(an, axis=1), 1e-300)
        worst = max(worst, float(np.max(np.linalg.norm(fd - an, axis=1) / scale)))
    return worst


def _allocate(lengths: Sequence[float], n: int) -> list[int]:
    # Largest-remainder split of n samples, proportional to parameter length.
    total = float(sum(lengths))
    shares = [n * L / total for L in lengths]
    counts = [int(math.floor(s)) for s in shares]
    order = sorted(range(len(lengths)), key=lambda k: (-(shares[k] - counts[k]), k))
    for k in order[: n - sum(counts)]:
        counts[k] += 1
    return counts


def sample_parameters(curve: ParametricCurve, n: int) -> np.ndarray:
    counts = _allocate([p.length for p in curve.pieces], n)
    ts = [p.start + p.length * np.arange(k) / k for p, k in zip(curve.pieces, counts) if k]
    return np.concatenate(ts)


def sample(curve: ParametricCurve, n: int) -> PolygonalCurve:
    """Polygon through ``n`` points at uniform parameter steps on each piece."""
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise InvalidArgumentError(f"need at least 3 samples, got {n!r}")
    if isinstance(curve, PolygonalCurve):
        curve = curve.as_parametric()
    require_closed(curve)
    return PolygonalCurve(curve.position(sample_parameters(curve, int(n))), curve.name)


def polygonize(curve: Curve, n: int = 256) -> PolygonalCurve:
    """Polygon for the exact and crossing methods.

    Piecewise-linear curves give their own vertices; smooth ones are sampled.
    """
    if isinstance(curve, PolygonalCurve):
        return curve
    if curve.is_piecewise_linear:
        require_closed(curve)
        return PolygonalCurve(curve.vertices(), curve.name)
    return sample(curve, n)


def _is_linear(c: Curve) -> bool:
    return isinstance(c, PolygonalCurve) or c.is_piecewise_linear


def _vertices(c: Curve) -> np.ndarray:
    return c.vertices if isinstance(c, PolygonalCurve) else c.vertices()


def _dense_params(curve: ParametricCurve, n: int) -> np.ndarray:
    return sample_parameters(curve, n)


def _refine(a: ParametricCurve, b: ParametricCurve, t0: float, s0: float) -> float:
    ia = int(a.piece_index(t0))
    ib = int(b.piece_index(s0))
    pa, pb = a.pieces[ia], b.pieces[ib]

    def f(x):
        r = pa.position(np.array([x[0]]))[0] - pb.position(np.array([x[1]]))[0]
        g = np.array([2 * r.dot(pa.tangent(np.array([x[0]]))[0]),
                      -2 * r.dot(pb.tangent(np.array([x[1]]))[0])])
        return float(r.dot(r)), g

    res = minimize(f, np.array([t0, s0]), jac=True, method="L-BFGS-B",
                   bounds=[(pa.start, pa.end), (pb.start, pb.end)],
                   options={"ftol": 1e-30, "gtol": 1e-16, "maxiter": 200})
    return float(res.fun)


def min_separation(a: Curve, b: Curve, samples: int = 4096, candidates: int = 8) -> float:
    """Smallest distance between points of ``a`` and points of ``b``.

    Polygon pairs use exact segment-segment distances. Otherwise nearest
    pairs among dense samples seed a bounded local minimization of the
    squared distance.
    """
    if _is_linear(a) and _is_linear(b) and closure_check(a) and closure_check(b):
        return float(kernels.segment_distance_matrix(_vertices(a), _vertices(b)).min())
    pa = a.as_parametric() if isinstance(a, PolygonalCurve) else a
    pb = b.as_parametric() if isinstance(b, PolygonalCurve) else b
    ta = _dense_params(pa, samples)
    tb = _dense_params(pb, samples)
    xa = pa.position(ta)
    xb = pb.position(tb)
    seeds: list[tuple[float, float, float]] = []
    d_ab, j_ab = cKDTree(xb).query(xa)
    for i in np.argsort(d_ab, kind="stable")[:candidates]:
        seeds.append((float(d_ab[i]) ** 2, ta[i], tb[j_ab[i]]))
    d_ba, j_ba = cKDTree(xa).query(xb)
    for j in np.argsort(d_ba, kind="stable")[:candidates]:
        seeds.append((float(d_ba[j]) ** 2, ta[j_ba[j]], tb[j]))
    best = min(s[0] for s in seeds)
    for _, t0, s0 in sorted(seeds):
        best = min(best, _refine(pa, pb, t0, s0))
    return math.sqrt(max(best, 0.0))


def bounding_diameter(curve: Curve, n: int = 512) -> float:
    pts = curve.vertices if isinstance(curve, PolygonalCurve) else curve.position(_dense_params(curve, n))
    return float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
