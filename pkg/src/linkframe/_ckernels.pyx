# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for the linking-number routines.

Every function here has a numpy twin in :mod:`linkframe._pykernels` with the
same signature and the same reduction order, so the two backends agree to
rounding.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport atan2, sqrt, INFINITY

cnp.import_array()


cdef inline double _clamp01(double x) noexcept nogil:
    if x < 0.0:
        return 0.0
    if x > 1.0:
        return 1.0
    return x


cdef inline double _point_segment_sq(
    double px, double py, double pz,
    double ax, double ay, double az,
    double dx, double dy, double dz,
) noexcept nogil:
    cdef double len2 = dx * dx + dy * dy + dz * dz
    cdef double t = 0.0
    if len2 > 0.0:
        t = _clamp01(((px - ax) * dx + (py - ay) * dy + (pz - az) * dz) / len2)
    cdef double ex = ax + t * dx - px
    cdef double ey = ay + t * dy - py
    cdef double ez = az + t * dz - pz
    return ex * ex + ey * ey + ez * ez


def gauss_sum(
    const double[:, ::1] X,
    const double[:, ::1] DX,
    const double[::1] wx,
    const double[:, ::1] Y,
    const double[:, ::1] DY,
    const double[::1] wy,
    int nthreads=1,
):
    """Weighted double sum of the Gauss integrand over two node sets.

    Returns ``(total, min_r2)``; ``total`` excludes the 1/4pi prefactor.
    Row sums are formed in parallel and reduced serially, so the result does
    not depend on ``nthreads``.
    """
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t m = Y.shape[0]
    cdef Py_ssize_t i, j
    cdef double[::1] rows = np.zeros(n)
    cdef double[::1] rmin = np.full(n, INFINITY)
    cdef double rx, ry, rz, r2, cx, cy, cz, acc, lo
    if nthreads < 1:
        nthreads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        acc = 0.0
        lo = INFINITY
        for j in range(m):
            rx = X[i, 0] - Y[j, 0]
            ry = X[i, 1] - Y[j, 1]
            rz = X[i, 2] - Y[j, 2]
            r2 = rx * rx + ry * ry + rz * rz
            if r2 < lo:
                lo = r2
            cx = DX[i, 1] * DY[j, 2] - DX[i, 2] * DY[j, 1]
            cy = DX[i, 2] * DY[j, 0] - DX[i, 0] * DY[j, 2]
            cz = DX[i, 0] * DY[j, 1] - DX[i, 1] * DY[j, 0]
            acc = acc + wy[j] * (cx * rx + cy * ry + cz * rz) / (r2 * sqrt(r2))
        rows[i] = wx[i] * acc
        rmin[i] = lo
    cdef double total = 0.0
    cdef double low = INFINITY
    for i in range(n):
        total += rows[i]
        if rmin[i] < low:
            low = rmin[i]
    return total, low


def solid_angle_matrix(
    const double[:, ::1] P,
    const double[:, ::1] Q,
    int nthreads=1,
):
    """Signed solid angle for every (segment of P, segment of Q) pair.

    Segment ``i`` of a closed polygon runs from vertex ``i`` to ``i + 1``
    (mod n). Each quadrilateral is split into two triangles along one
    diagonal and each triangle is evaluated with a two-argument arctangent,
    so no branch selection is needed.
    """
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t m = Q.shape[0]
    cdef Py_ssize_t i, j, i1, j1
    out_arr = np.empty((n, m))
    cdef double[:, ::1] out = out_arr
    cdef double ax, ay, az, bx, by, bz, cx, cy, cz, ex, ey, ez
    cdef double an, bn, cn, en, trip, den1, den2
    if nthreads < 1:
        nthreads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        i1 = i + 1
        if i1 == n:
            i1 = 0
        for j in range(m):
            j1 = j + 1
            if j1 == m:
                j1 = 0
            ax = P[i, 0] - Q[j, 0]
            ay = P[i, 1] - Q[j, 1]
            az = P[i, 2] - Q[j, 2]
            bx = P[i, 0] - Q[j1, 0]
            by = P[i, 1] - Q[j1, 1]
            bz = P[i, 2] - Q[j1, 2]
            cx = P[i1, 0] - Q[j1, 0]
            cy = P[i1, 1] - Q[j1, 1]
            cz = P[i1, 2] - Q[j1, 2]
            ex = P[i1, 0] - Q[j, 0]
            ey = P[i1, 1] - Q[j, 1]
            ez = P[i1, 2] - Q[j, 2]
            an = sqrt(ax * ax + ay * ay + az * az)
            bn = sqrt(bx * bx + by * by + bz * bz)
            cn = sqrt(cx * cx + cy * cy + cz * cz)
            en = sqrt(ex * ex + ey * ey + ez * ez)
            trip = ax * (by * cz - bz * cy) + ay * (bz * cx - bx * cz) + az * (bx * cy - by * cx)
            den1 = (an * bn * cn + (ax * bx + ay * by + az * bz) * cn
                    + (bx * cx + by * cy + bz * cz) * an + (cx * ax + cy * ay + cz * az) * bn)
            den2 = (an * en * cn + (ax * ex + ay * ey + az * ez) * cn
                    + (ex * cx + ey * cy + ez * cz) * an + (cx * ax + cy * ay + cz * az) * en)
            out[i, j] = 2.0 * (atan2(trip, den1) + atan2(trip, den2))
    return out_arr


def segment_distance_matrix(
    const double[:, ::1] P,
    const double[:, ::1] Q,
    int nthreads=1,
):
    """Exact minimum distance between every segment of P and every segment of Q."""
    cdef Py_ssize_t n = P.shape[0]
    cdef Py_ssize_t m = Q.shape[0]
    cdef Py_ssize_t i, j, i1, j1
    out_arr = np.empty((n, m))
    cdef double[:, ::1] out = out_arr
    cdef double d1x, d1y, d1z, d2x, d2y, d2z, rx, ry, rz
    cdef double a, b, c, e, f, denom, s, t, best, cur, ux, uy, uz
    if nthreads < 1:
        nthreads = 1
    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        i1 = i + 1
        if i1 == n:
            i1 = 0
        d1x = P[i1, 0] - P[i, 0]
        d1y = P[i1, 1] - P[i, 1]
        d1z = P[i1, 2] - P[i, 2]
        for j in range(m):
            j1 = j + 1
            if j1 == m:
                j1 = 0
            d2x = Q[j1, 0] - Q[j, 0]
            d2y = Q[j1, 1] - Q[j, 1]
            d2z = Q[j1, 2] - Q[j, 2]
            best = _point_segment_sq(P[i, 0], P[i, 1], P[i, 2], Q[j, 0], Q[j, 1], Q[j, 2], d2x, d2y, d2z)
            cur = _point_segment_sq(P[i1, 0], P[i1, 1], P[i1, 2], Q[j, 0], Q[j, 1], Q[j, 2], d2x, d2y, d2z)
            if cur < best:
                best = cur
            cur = _point_segment_sq(Q[j, 0], Q[j, 1], Q[j, 2], P[i, 0], P[i, 1], P[i, 2], d1x, d1y, d1z)
            if cur < best:
                best = cur
            cur = _point_segment_sq(Q[j1, 0], Q[j1, 1], Q[j1, 2], P[i, 0], P[i, 1], P[i, 2], d1x, d1y, d1z)
            if cur < best:
                best = cur
            rx = P[i, 0] - Q[j, 0]
            ry = P[i, 1] - Q[j, 1]
            rz = P[i, 2] - Q[j, 2]
            a = d1x * d1x + d1y * d1y + d1z * d1z
            e = d2x * d2x + d2y * d2y + d2z * d2z
            b = d1x * d2x + d1y * d2y + d1z * d2z
            c = d1x * rx + d1y * ry + d1z * rz
            f = d2x * rx + d2y * ry + d2z * rz
            denom = a * e - b * b
            if denom > 1e-14 * a * e:
                s = (b * f - c * e) / denom
                t = (a * f - b * c) / denom
                if s > 0.0 and s < 1.0 and t > 0.0 and t < 1.0:
                    ux = rx + s * d1x - t * d2x
                    uy = ry + s * d1y - t * d2y
                    uz = rz + s * d1z - t * d2z
                    cur = ux * ux + uy * uy + uz * uz
                    if cur < best:
                        best = cur
            out[i, j] = sqrt(best)
    return out_arr
