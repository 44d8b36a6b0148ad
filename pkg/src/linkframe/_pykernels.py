"""Numpy versions of the compiled kernels in ``_ckernels.pyx``.

Same signatures, same row-then-serial reduction, so results match the
compiled backend up to rounding. ``nthreads`` is accepted and ignored.
"""

from __future__ import annotations

import numpy as np

# Bound on the (rows x cols x 3) temporaries built per block.
_BLOCK_ELEMS = 1 << 21


def _row_blocks(n: int, m: int):
    step = max(1, _BLOCK_ELEMS // max(1, 3 * m))
    for start in range(0, n, step):
        yield start, min(n, start + step)


def gauss_sum(X, DX, wx, Y, DY, wy, nthreads: int = 1):
    n = X.shape[0]
    rows = np.empty(n)
    rmin = np.empty(n)
    for lo, hi in _row_blocks(n, Y.shape[0]):
        r = X[lo:hi, None, :] - Y[None, :, :]
        r2 = np.einsum("ijk,ijk->ij", r, r)
        c = np.cross(DX[lo:hi, None, :], DY[None, :, :])
        f = np.einsum("ijk,ijk->ij", c, r) / (r2 * np.sqrt(r2))
        rows[lo:hi] = wx[lo:hi] * (f @ wy)
        rmin[lo:hi] = r2.min(axis=1)
    total = 0.0
    for v in rows:
        total += v
    return total, float(rmin.min()) if n else np.inf


def solid_angle_matrix(P, Q, nthreads: int = 1):
    P1 = np.roll(P, -1, axis=0)
    Q1 = np.roll(Q, -1, axis=0)
    a = P[:, None, :] - Q[None, :, :]
    b = P[:, None, :] - Q1[None, :, :]
    c = P1[:, None, :] - Q1[None, :, :]
    e = P1[:, None, :] - Q[None, :, :]
    an, bn, cn, en = (np.linalg.norm(v, axis=-1) for v in (a, b, c, e))

    def dot(u, v):
        return np.einsum("ijk,ijk->ij", u, v)

    trip = dot(a, np.cross(b, c))
    ca = dot(c, a)
    den1 = an * bn * cn + dot(a, b) * cn + dot(b, c) * an + ca * bn
    den2 = an * en * cn + dot(a, e) * cn + dot(e, c) * an + ca * en
    return 2.0 * (np.arctan2(trip, den1) + np.arctan2(trip, den2))


def _point_segment_sq(p, a, d):
    len2 = np.einsum("...k,...k->...", d, d)
    t = np.where(len2 > 0, np.einsum("...k,...k->...", p - a, d) / np.where(len2 > 0, len2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    diff = a + t[..., None] * d - p
    return np.einsum("...k,...k->...", diff, diff)


def segment_distance_matrix(P, Q, nthreads: int = 1):
    n, m = P.shape[0], Q.shape[0]
    p0 = np.broadcast_to(P[:, None, :], (n, m, 3))
    p1 = np.broadcast_to(np.roll(P, -1, axis=0)[:, None, :], (n, m, 3))
    q0 = np.broadcast_to(Q[None, :, :], (n, m, 3))
    q1 = np.broadcast_to(np.roll(Q, -1, axis=0)[None, :, :], (n, m, 3))
    d1 = p1 - p0
    d2 = q1 - q0
    best = np.minimum.reduce([
        _point_segment_sq(p0, q0, d2),
        _point_segment_sq(p1, q0, d2),
        _point_segment_sq(q0, p0, d1),
        _point_segment_sq(q1, p0, d1),
    ])
    r = p0 - q0
    a = np.einsum("ijk,ijk->ij", d1, d1)
    e = np.einsum("ijk,ijk->ij", d2, d2)
    b = np.einsum("ijk,ijk->ij", d1, d2)
    c = np.einsum("ijk,ijk->ij", d1, r)
    f = np.einsum("ijk,ijk->ij", d2, r)
    denom = a * e - b * b
    ok = denom > 1e-14 * a * e
    safe = np.where(ok, denom, 1.0)
    s = (b * f - c * e) / safe
    t = (a * f - b * c) / safe
    inside = ok & (s > 0) & (s < 1) & (t > 0) & (t < 1)
    u = r + s[..., None] * d1 - t[..., None] * d2
    interior = np.einsum("ijk,ijk->ij", u, u)
    best = np.where(inside, np.minimum(best, interior), best)
    return np.sqrt(best)
