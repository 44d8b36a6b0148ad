"""Linking number from a planar projection: half the signed count of
crossings between the two components."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import Curve, PolygonalCurve, polygonize
from .errors import DegeneracyError, InvalidArgumentError
from .estimate import LinkEstimate

GENERIC_TOL = 1e-9
RETRY_SEED = 0x4C494E4B
MAX_ATTEMPTS = 32
DEFAULT_DIRECTION = (0.0, 0.0, 1.0)


@dataclass(frozen=True)
class Crossing:
    over: str  # "first" or "second": which polygon passes over
    over_segment: int
    under_segment: int
    sign: int
    projected_point: tuple[float, float]


def _frame(direction) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = np.asarray(direction, dtype=np.float64)
    norm = np.linalg.norm(d)
    if d.shape != (3,) or not norm > 0:
        raise InvalidArgumentError("direction must be a nonzero 3-vector")
    d = d / norm
    helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = helper - helper.dot(d) * d
    u /= np.linalg.norm(u)
    return u, np.cross(d, u), d


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def signed_crossings(P: Curve, Q: Curve, direction=DEFAULT_DIRECTION) -> list[Crossing]:
    """Crossings of the projections of P and Q, viewed from the tip of ``direction``.

    The viewer sits at +infinity along ``direction``; the strand with the
    larger height is "over". A crossing is +1 when the over tangent turns
    counter-clockwise onto the under tangent.
    """
    P, Q = polygonize(P), polygonize(Q)
    u, v, d = _frame(direction)
    basis = np.stack([u, v], axis=1)
    A, B = P.vertices, Q.vertices
    a0, b0 = A @ basis, B @ basis
    ha, hb = A @ d, B @ d
    e = np.roll(a0, -1, axis=0) - a0
    f = np.roll(b0, -1, axis=0) - b0
    dha = np.roll(ha, -1) - ha
    dhb = np.roll(hb, -1) - hb

    diam = float(np.linalg.norm(np.ptp(np.vstack([a0, b0]), axis=0)))
    tol = GENERIC_TOL * max(diam, 1e-300)

    E = e[:, None, :]
    F = f[None, :, :]
    W = b0[None, :, :] - a0[:, None, :]
    denom = _cross2(E, F)
    len_e = np.linalg.norm(e, axis=1)[:, None]
    len_f = np.linalg.norm(f, axis=1)[None, :]
    for name, lengths in (("first", len_e.ravel()), ("second", len_f.ravel())):
        if np.any(lengths <= tol):
            k = int(np.argmin(lengths))
            raise DegeneracyError(f"edge {k} of the {name} polygon projects to a point",
                                  feature=(name, "edge", k))
    parallel = np.abs(denom) <= GENERIC_TOL * len_e * len_f
    safe = np.where(parallel, 1.0, denom)
    alpha = _cross2(W, F) / safe
    beta = _cross2(W, E) / safe

    # Parallel edges whose lines coincide and whose extents overlap.
    line_gap = np.abs(_cross2(W, E)) / np.maximum(len_e, 1e-300)
    if np.any(parallel & (line_gap <= tol)):
        s0 = np.einsum("ijk,ijk->ij", W, np.broadcast_to(E, W.shape)) / np.maximum(len_e ** 2, 1e-300)
        s1 = s0 + np.einsum("ijk,ijk->ij", np.broadcast_to(F, W.shape), np.broadcast_to(E, W.shape)) \
            / np.maximum(len_e ** 2, 1e-300)
        lo, hi = np.minimum(s0, s1), np.maximum(s0, s1)
        overlap = parallel & (line_gap <= tol) & (hi >= -tol / len_e) & (lo <= 1 + tol / len_e)
        if np.any(overlap):
            i, j = map(int, np.argwhere(overlap)[0])
            raise DegeneracyError(f"projected edges {i} and {j} overlap", feature=("edge", i, "edge", j))

    ta = tol / len_e
    tb = tol / len_f
    hit = ~parallel & (alpha > -ta) & (alpha < 1 + ta) & (beta > -tb) & (beta < 1 + tb)
    near_end = hit & ((np.abs(alpha) <= ta) | (np.abs(alpha - 1) <= ta)
                      | (np.abs(beta) <= tb) | (np.abs(beta - 1) <= tb))
    if np.any(near_end):
        i, j = map(int, np.argwhere(near_end)[0])
        raise DegeneracyError(f"a projected vertex lies on an edge (edges {i}, {j})",
                              feature=("vertex", i, "edge", j))

    out: list[Crossing] = []
    for i, j in np.argwhere(hit):
        al, be = alpha[i, j], beta[i, j]
        h1 = ha[i] + al * dha[i]
        h2 = hb[j] + be * dhb[j]
        if abs(h1 - h2) <= tol:
            raise DegeneracyError(f"edges {i} and {j} meet in space", feature=("edge", int(i), "edge", int(j)))
        pt = a0[i] + al * e[i]
        if h1 > h2:
            over, os_, us, to, tu = "first", int(i), int(j), e[i], f[j]
        else:
            over, os_, us, to, tu = "second", int(j), int(i), f[j], e[i]
        sign = 1 if _cross2(to, tu) > 0 else -1
        out.append(Crossing(over, os_, us, sign, (float(pt[0]), float(pt[1]))))
    return out


def projection_directions():
    """Default direction, then seeded random unit vectors."""
    yield np.array(DEFAULT_DIRECTION)
    rng = np.random.default_rng(RETRY_SEED)
    while True:
        g = rng.normal(size=3)
        yield g / np.linalg.norm(g)


def link_by_crossings(P: Curve, Q: Curve) -> LinkEstimate:
    P, Q = polygonize(P), polygonize(Q)
    last: DegeneracyError | None = None
    for attempt, direction in zip(range(MAX_ATTEMPTS), projection_directions()):
        try:
            total = sum(c.sign for c in signed_crossings(P, Q, direction))
        except DegeneracyError as exc:
            last = exc
            continue
        if total % 2:
            last = DegeneracyError(f"odd crossing sum {total} along {direction}")
            continue
        return LinkEstimate.from_value(total // 2, 0.0, "crossing_oracle")
    raise DegeneracyError(f"{MAX_ATTEMPTS} projections in a row were degenerate: {last}",
                          feature=getattr(last, "feature", None))
