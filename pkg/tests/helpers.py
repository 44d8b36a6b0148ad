from __future__ import annotations

import numpy as np

from linkframe import PolygonalCurve, min_separation


def random_polygon(rng: np.random.Generator, n: int, box: float = 2.0) -> PolygonalCurve:
    return PolygonalCurve(rng.uniform(-box, box, size=(n, 3)))


def random_disjoint_pair(rng: np.random.Generator, min_sep: float = 0.05,
                         sizes: tuple[int, int] = (3, 8)) -> tuple[PolygonalCurve, PolygonalCurve]:
    """Rejection-sample two polygons with vertices uniform in [-2, 2]^3."""
    lo, hi = sizes
    while True:
        n, m = rng.integers(lo, hi + 1, size=2)
        P = random_polygon(rng, int(n))
        Q = random_polygon(rng, int(m))
        if min_separation(P, Q) > min_sep:
            return P, Q


def random_rotation(rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q
