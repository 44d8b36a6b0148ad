from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

Method = Literal["quadrature", "exact_polygonal", "crossing_oracle"]
METHODS: tuple[str, ...] = ("quadrature", "exact_polygonal", "crossing_oracle")


def nearest_int(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class LinkEstimate:
    """A linking-number value with its error bound and integer reading.

    ``confident`` holds when the whole error interval sits strictly inside the
    rounding cell of ``rounded``. ``history`` lists the error bound reached at
    each refinement level (quadrature only).
    """

    value: float
    abs_error_bound: float
    method: str
    rounded: int
    confident: bool
    history: tuple[float, ...] = field(default=(), compare=False)

    @classmethod
    def from_value(cls, value: float, abs_error_bound: float, method: str,
                   history: tuple[float, ...] = ()) -> "LinkEstimate":
        if method not in METHODS:
            raise ValueError(f"unknown method {method!r}")
        value = float(value)
        bound = float(abs_error_bound)
        rounded = nearest_int(value)
        confident = math.isfinite(value) and abs(value - rounded) + bound < 0.5
        return cls(value, bound, method, rounded, confident, tuple(history))

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_bound": self.abs_error_bound,
            "method": self.method,
            "rounded": self.rounded,
            "confident": self.confident,
        }
