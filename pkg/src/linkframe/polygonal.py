"""Closed-form linking number of two polygons.

For a segment pair the Gauss double integral equals the signed solid angle
of the spherical quadrilateral swept by ``(x - y)/|x - y|``, divided by 4pi.
The quadrilateral is split into two triangles, each evaluated with a
two-argument arctangent, so no branch bookkeeping is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .curves import Curve, PolygonalCurve, polygonize
from .errors import InvalidArgumentError, SingularityError
from .estimate import LinkEstimate

FOUR_PI = 4.0 * math.pi
SINGULAR_SEPARATION = 1e-12
NEAR_SINGULAR_SEPARATION = 1e-6
NEAR_SINGULAR_BOUND = 1e-4
PER_PAIR_ROUNDING = 1e-12


def segment_pair_link(p1, p2, q1, q2) -> float:
    """Signed solid angle (4pi times the Gauss integral) for segments p1->p2 and q1->q2."""
    P = np.array([p1, p2], dtype=np.float64).reshape(2, 3)
    Q = np.array([q1, q2], dtype=np.float64).reshape(2, 3)
    if np.linalg.norm(P[1] - P[0]) == 0 or np.linalg.norm(Q[1] - Q[0]) == 0:
        raise InvalidArgumentError("zero-length segment")
    dist = float(kernels.segment_distance_matrix(P, Q)[0, 0])
    if not dist > SINGULAR_SEPARATION:
        raise SingularityError(f"segments pass within {dist:.3e}", pair=(0, 0), distance=dist)
    return float(kernels.solid_angle_matrix(P, Q)[0, 0])


def _polygon(c: Curve) -> PolygonalCurve:
    return polygonize(c)


def contribution_matrix(P: Curve, Q: Curve) -> tuple[np.ndarray, np.ndarray]:
    """Solid angles and separations for every segment pair, shape (n, m)."""
    P, Q = _polygon(P), _polygon(Q)
    dist = kernels.segment_distance_matrix(P.vertices, Q.vertices)
    k = int(np.argmin(dist))
    i, j = divmod(k, dist.shape[1])
    if not dist[i, j] > SINGULAR_SEPARATION:
        raise SingularityError(
            f"segment {i} of the first polygon and segment {j} of the second are "
            f"{dist[i, j]:.3e} apart", pair=(int(i), int(j)), distance=float(dist[i, j]))
    return kernels.solid_angle_matrix(P.vertices, Q.vertices), dist


def link_exact(P: Curve, Q: Curve) -> LinkEstimate:
    """Linking number of two disjoint polygons, summed row-major with exact rounding."""
    omega, dist = contribution_matrix(P, Q)
    value = math.fsum(omega.ravel()) / FOUR_PI
    bound = omega.size * PER_PAIR_ROUNDING
    if np.any(dist < NEAR_SINGULAR_SEPARATION):
        bound += NEAR_SINGULAR_BOUND
    return LinkEstimate.from_value(value, bound, "exact_polygonal")


@dataclass(frozen=True)
class ContributionClass:
    value: float
    members: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SymmetryReport:
    contributions: np.ndarray
    classes: tuple[ContributionClass, ...]
    total: float

    @property
    def distinct(self) -> int:
        return len(self.classes)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(c.size for c in self.classes)

    @property
    def linking_number(self) -> float:
        return self.total / FOUR_PI


def symmetry_report(P: Curve, Q: Curve, tol: float = 1e-9) -> SymmetryReport:
    """Group the segment-pair solid angles into classes of equal value."""
    omega, _ = contribution_matrix(P, Q)
    flat = omega.ravel()
    order = np.argsort(flat, kind="stable")
    groups: list[list[int]] = []
    for k in order:
        if groups and flat[k] - flat[groups[-1][-1]] <= tol:
            groups[-1].append(int(k))
        else:
            groups.append([int(k)])
    m = omega.shape[1]
    classes = tuple(
        ContributionClass(float(np.mean(flat[g])), tuple(sorted(divmod(k, m) for k in g)))
        for g in groups
    )
    return SymmetryReport(omega, classes, math.fsum(flat))
