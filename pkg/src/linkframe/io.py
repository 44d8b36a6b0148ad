"""JSON curve files and polyline export.

Curve objects::

    {"type": "circle", "center": [x, y, z], "radius": r, "normal": [x, y, z], "phase": t0}
    {"type": "polygon", "vertices": [[x, y, z], ...]}
    {"type": "paper_example", "id": "framing_one", "epsilon": 0.05, "which": "first"}
    {"type": "piecewise", "pieces": [{"kind": "line", "from": [...], "to": [...], "t": [a, b]}, ...]}

A pair file is ``{"first": <curve>, "second": <curve>, "label": "..."}`` or a
bare ``paper_example`` object. A framed-curve file is
``{"base": <curve>, "framing": {...}, "offset": 0.1}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable

import numpy as np

from .curves import (Curve, CurvePair, ParametricCurve, PolygonalCurve, circle,
                     line_piece, paper_example)
from .errors import InvalidArgumentError
from .framing import FramedCurve, add_twists, blackboard_framing


class InputError(InvalidArgumentError):
    """Malformed input file; carries the JSON position when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def load_json(path: str | Path) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be a JSON object")
    return data


def _vec(d: dict, key: str, default=None) -> np.ndarray:
    if key not in d:
        if default is None:
            raise InputError(f"missing field {key!r}")
        return np.asarray(default, dtype=np.float64)
    try:
        v = np.asarray(d[key], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InputError(f"field {key!r} must be numeric") from exc
    if v.shape != (3,):
        raise InputError(f"field {key!r} must be a 3-vector")
    return v


def curve_from_dict(d: dict) -> Curve:
    if not isinstance(d, dict):
        raise InputError("a curve must be a JSON object")
    kind = d.get("type")
    if kind == "circle":
        return circle(_vec(d, "center", (0, 0, 0)), float(d.get("radius", 1.0)),
                      _vec(d, "normal", (0, 0, 1)), float(d.get("phase", 0.0)), d.get("name", ""))
    if kind == "polygon":
        try:
            verts = np.asarray(d["vertices"], dtype=np.float64)
        except KeyError as exc:
            raise InputError("polygon needs 'vertices'") from exc
        except (TypeError, ValueError) as exc:
            raise InputError("polygon vertices must be numeric") from exc
        return PolygonalCurve(verts, d.get("name", ""))
    if kind == "paper_example":
        pair = pair_from_dict(d)
        which = d.get("which", "first")
        if which not in ("first", "second"):
            raise InputError("'which' must be 'first' or 'second'")
        return getattr(pair, which)
    if kind == "piecewise":
        pieces = []
        for k, p in enumerate(d.get("pieces") or []):
            if p.get("kind") != "line":
                raise InputError(f"piece {k}: only 'line' pieces are supported")
            t = p.get("t", [k, k + 1])
            if len(t) != 2:
                raise InputError(f"piece {k}: 't' must be [a, b]")
            pieces.append(line_piece(_vec(p, "from"), _vec(p, "to"), float(t[0]), float(t[1])))
        if not pieces:
            raise InputError("piecewise curve needs at least one piece")
        return ParametricCurve(tuple(pieces), d.get("name", ""))
    raise InputError(f"unknown curve type {kind!r}")


def pair_from_dict(d: dict) -> CurvePair:
    if d.get("type") == "paper_example":
        return paper_example(str(d.get("id")), float(d.get("epsilon", 1.0)))
    if "first" not in d or "second" not in d:
        raise InputError("a pair needs 'first' and 'second' curves")
    return CurvePair(curve_from_dict(d["first"]), curve_from_dict(d["second"]), str(d.get("label", "")))


def framed_from_dict(d: dict) -> FramedCurve:
    if "base" not in d:
        raise InputError("a framed curve needs a 'base' curve")
    base = curve_from_dict(d["base"])
    offset = d.get("offset")
    f = blackboard_framing(base, None if offset is None else float(offset))
    framing = d.get("framing", {"kind": "blackboard"})
    kind = framing.get("kind", "blackboard")
    if kind == "blackboard":
        return f
    if kind == "twists":
        n = framing.get("n", 0)
        profile = framing.get("profile", "uniform")
        return add_twists(f, n, profile, framing.get("center"), framing.get("width"))
    raise InputError(f"unknown framing kind {kind!r}")


def is_pair(d: dict) -> bool:
    return "first" in d and "second" in d


def format_csv(polylines: Iterable[PolygonalCurve]) -> str:
    """One ``x,y,z`` row per vertex, first vertex repeated; blank line between curves."""
    blocks = []
    for poly in polylines:
        v = np.vstack([poly.vertices, poly.vertices[:1]])
        blocks.append("\n".join(",".join(repr(float(c)) for c in row) for row in v))
    return "\n\n".join(blocks) + "\n"


def format_obj(polylines: Iterable[PolygonalCurve]) -> str:
    vlines, llines = [], []
    base = 1
    for poly in polylines:
        n = len(poly.vertices)
        vlines += ["v " + " ".join(repr(float(c)) for c in row) for row in poly.vertices]
        idx = list(range(base, base + n)) + [base]
        llines.append("l " + " ".join(map(str, idx)))
        base += n
    return "\n".join(vlines + llines) + "\n"


def read_csv_polylines(text: str) -> list[np.ndarray]:
    out = []
    for block in text.strip().split("\n\n"):
        rows = [list(map(float, line.split(","))) for line in block.strip().splitlines()]
        out.append(np.array(rows))
    return out
