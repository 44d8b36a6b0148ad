"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
fallback. ``LINKFRAME_BACKEND=python`` forces the fallback and
``LINKFRAME_THREADS`` caps the thread count of the compiled loops.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def default_backend() -> str:
    forced = os.environ.get("LINKFRAME_BACKEND", "").strip().lower()
    if forced in _BACKENDS:
        return forced
    return "cython" if "cython" in _BACKENDS else "python"


BACKEND = default_backend()


def thread_count() -> int:
    raw = os.environ.get("LINKFRAME_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = os.cpu_count() or 1
    return max(1, n)


def _impl(backend: str | None):
    return _BACKENDS[backend or BACKEND]


def _c3(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64).reshape(-1, 3)


def gauss_sum(X, DX, wx, Y, DY, wy, backend: str | None = None) -> tuple[float, float]:
    """Return (sum_ij wx_i wy_j (DX_i x DY_j).(X_i - Y_j) / |X_i - Y_j|^3, min |X_i - Y_j|^2)."""
    total, low = _impl(backend).gauss_sum(
        _c3(X), _c3(DX), np.ascontiguousarray(wx, dtype=np.float64),
        _c3(Y), _c3(DY), np.ascontiguousarray(wy, dtype=np.float64),
        thread_count(),
    )
    return float(total), float(low)


def solid_angle_matrix(P, Q, backend: str | None = None) -> np.ndarray:
    return np.asarray(_impl(backend).solid_angle_matrix(_c3(P), _c3(Q), thread_count()))


def segment_distance_matrix(P, Q, backend: str | None = None) -> np.ndarray:
    return np.asarray(_impl(backend).segment_distance_matrix(_c3(P), _c3(Q), thread_count()))
