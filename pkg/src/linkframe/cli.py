"""``linkframe`` command line.

stdout carries JSON only (one report object per line); logs go to stderr.
Exit codes: 0 success, 2 bad input, 3 numerical failure or non-confident
result, 4 output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .crossings import link_by_crossings
from .curves import PAPER_EXAMPLES, CurvePair, polygonize, paper_example
from .errors import ConvergenceError, DegeneracyError, InvalidArgumentError, SingularityError
from .estimate import LinkEstimate
from .framing import FRAMING_METHODS, framing_number
from .io import (InputError, curve_from_dict, format_csv, format_obj, framed_from_dict,
                 is_pair, load_json, pair_from_dict)
from .polygonal import link_exact
from .quadrature import QuadratureConfig, link_numeric
from .wilson import best_link, wilson_expectation

log = logging.getLogger("linkframe")

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

LINK_METHODS = {"quadrature": "quadrature", "exact": "exact_polygonal", "crossings": "crossing_oracle"}


@dataclass
class RunReport:
    input_label: str
    method: str
    value: float
    rounded: int
    confident: bool
    abs_error_bound: float
    wall_time_ms: float
    config: dict = field(default_factory=dict)
    wilson: dict | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        return cls(**json.loads(text))

    @classmethod
    def from_estimate(cls, label: str, est: LinkEstimate, started: float, config: dict,
                      wilson: dict | None = None) -> "RunReport":
        return cls(label, est.method, est.value, est.rounded, est.confident, est.abs_error_bound,
                   (time.perf_counter() - started) * 1e3, config, wilson)


class _Failure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _quad_config(args) -> QuadratureConfig:
    return QuadratureConfig(
        panels_per_piece=args.panels, nodes_per_panel=args.nodes,
        target_abs_error=args.target_error, max_refinements=args.max_refinements,
    )


def _config_echo(args, keys) -> dict:
    echo = {"command": args.command}
    for k in keys:
        v = getattr(args, k, None)
        if v is not None:
            echo[k] = v
    return echo


def _load_pair(args) -> tuple[CurvePair, str]:
    if args.example:
        pair = paper_example(args.example, args.epsilon)
        return pair, pair.label
    if not args.file:
        raise InputError("give a pair file or --example")
    data = load_json(args.file)
    pair = pair_from_dict(data)
    return pair, pair.label or str(args.file)


def _run_method(method: str, pair: CurvePair, args) -> LinkEstimate:
    if method == "quadrature":
        return link_numeric(pair, _quad_config(args))
    P = polygonize(pair.first, args.samples)
    Q = polygonize(pair.second, args.samples)
    if method == "exact":
        return link_exact(P, Q)
    return link_by_crossings(P, Q)


def cmd_link(args) -> tuple[int, list[RunReport]]:
    pair, label = _load_pair(args)
    methods = list(LINK_METHODS) if args.method == "all" else [args.method]
    config = _config_echo(args, ["file", "example", "epsilon", "method", "samples", "panels",
                                 "nodes", "target_error", "max_refinements"])
    reports, code = [], EXIT_OK
    for m in methods:
        started = time.perf_counter()
        try:
            est = _run_method(m, pair, args)
        except (SingularityError, ConvergenceError, DegeneracyError) as exc:
            log.error("%s: %s", m, exc)
            est = getattr(exc, "estimate", None)
            code = EXIT_NUMERIC
            if est is None:
                continue
        reports.append(RunReport.from_estimate(label, est, started, config))
        if not est.confident:
            code = EXIT_NUMERIC
    return code, reports


def cmd_framing(args) -> tuple[int, list[RunReport]]:
    if not args.file:
        raise InputError("give a framed-curve file")
    started = time.perf_counter()
    framed = framed_from_dict(load_json(args.file))
    config = _config_echo(args, ["file", "method", "samples", "panels", "nodes",
                                 "target_error", "max_refinements"])
    try:
        est = framing_number(framed, _quad_config(args), args.method, args.samples)
    except ConvergenceError as exc:
        log.error("framing: %s", exc)
        if exc.estimate is None:
            return EXIT_NUMERIC, []
        return EXIT_NUMERIC, [RunReport.from_estimate(str(args.file), exc.estimate, started, config)]
    return EXIT_OK, [RunReport.from_estimate(str(args.file), est, started, config)]


def cmd_wilson(args) -> tuple[int, list[RunReport]]:
    started = time.perf_counter()
    config = _config_echo(args, ["file", "example", "epsilon", "lk", "k", "panels", "nodes",
                                 "target_error", "max_refinements"])
    if args.lk is not None:
        w = wilson_expectation(args.lk, args.k)
        rep = RunReport("lk", "given", float(args.lk), args.lk, True, 0.0,
                        (time.perf_counter() - started) * 1e3, config, w.to_dict())
        return EXIT_OK, [rep]
    pair, label = _load_pair(args)
    est = best_link(pair, _quad_config(args))
    if not est.confident:
        return EXIT_NUMERIC, [RunReport.from_estimate(label, est, started, config)]
    w = wilson_expectation(est.rounded, args.k)
    return EXIT_OK, [RunReport.from_estimate(label, est, started, config, w.to_dict())]


def cmd_export(args) -> tuple[int, list[dict]]:
    if args.example:
        pair = paper_example(args.example, args.epsilon)
        curves = [pair.first, pair.second]
    elif args.file:
        data = load_json(args.file)
        if is_pair(data) or data.get("type") == "paper_example" and "which" not in data:
            pair = pair_from_dict(data)
            curves = [pair.first, pair.second]
        else:
            curves = [curve_from_dict(data)]
    else:
        raise InputError("give a curve file or --example")
    polys = [polygonize(c, args.samples) for c in curves]
    text = format_csv(polys) if args.format == "csv" else format_obj(polys)
    if not args.out:
        sys.stdout.write(text)
        return EXIT_OK, []
    try:
        Path(args.out).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise _Failure(EXIT_IO, f"cannot write {args.out}: {exc}") from exc
    return EXIT_OK, [{"written": str(args.out), "format": args.format,
                      "vertices": [len(p.vertices) for p in polys]}]


def config_to_argv(config: dict) -> list[str]:
    """Rebuild a command line from a report's config echo."""
    argv = [config["command"]]
    if "file" in config:
        argv.append(str(config["file"]))
    for key, value in config.items():
        if key in ("command", "file"):
            continue
        argv += ["--" + key.replace("_", "-"), repr(value) if isinstance(value, float) else str(value)]
    return argv


def cmd_replay(args) -> tuple[int, list[RunReport]]:
    try:
        lines = [ln for ln in Path(args.file).read_text(encoding="utf-8").splitlines() if ln.strip()]
        configs = [json.loads(ln)["config"] for ln in lines]
    except (OSError, ValueError, KeyError) as exc:
        raise InputError(f"cannot read report {args.file}: {exc}") from exc
    code, out, seen = EXIT_OK, [], set()
    for cfg in configs:
        argv = config_to_argv(cfg)
        key = tuple(argv)
        if key in seen:
            continue
        seen.add(key)
        sub = build_parser().parse_args(argv)
        c, reps = sub.handler(sub)
        code = max(code, c)
        out += reps
    return code, out


def _add_quadrature_flags(p: argparse.ArgumentParser) -> None:
    d = QuadratureConfig()
    p.add_argument("--target-error", type=float, default=d.target_abs_error)
    p.add_argument("--panels", type=int, default=d.panels_per_piece, help="initial panels per piece")
    p.add_argument("--nodes", type=int, default=d.nodes_per_panel, help="Gauss nodes per panel")
    p.add_argument("--max-refinements", type=int, default=d.max_refinements)


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("file", nargs="?", help="JSON pair file")
    p.add_argument("--example", choices=PAPER_EXAMPLES)
    p.add_argument("--epsilon", type=float, default=1.0, help="size of the small circle for framing_one")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linkframe", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", help="linking number of a curve pair")
    _add_source_flags(p)
    p.add_argument("--method", choices=[*LINK_METHODS, "all"], default="all")
    p.add_argument("--samples", type=int, default=256, help="vertices when polygonizing smooth curves")
    _add_quadrature_flags(p)
    p.set_defaults(handler=cmd_link)

    p = sub.add_parser("framing", help="framing number of a framed curve")
    p.add_argument("file", nargs="?", help="JSON framed-curve file")
    p.add_argument("--method", choices=FRAMING_METHODS, default="exact")
    p.add_argument("--samples", type=int, default=256)
    _add_quadrature_flags(p)
    p.set_defaults(handler=cmd_framing)

    p = sub.add_parser("wilson", help="Wilson loop phase exp(2 pi i lk / k)")
    _add_source_flags(p)
    p.add_argument("--lk", type=int)
    p.add_argument("--k", type=int, required=True)
    _add_quadrature_flags(p)
    p.set_defaults(handler=cmd_wilson)

    p = sub.add_parser("export", help="write sampled curves as CSV or OBJ polylines")
    _add_source_flags(p)
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--format", choices=["csv", "obj"], default="csv")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser("replay", help="re-run the commands echoed in a report file")
    p.add_argument("file")
    p.set_defaults(handler=cmd_replay)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        code, reports = args.handler(args)
    except _Failure as exc:
        log.error("%s", exc)
        return exc.code
    except InputError as exc:
        log.error("input error: %s", exc)
        return EXIT_INPUT
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return EXIT_INPUT
    except (SingularityError, ConvergenceError, DegeneracyError) as exc:
        log.error("%s: %s", args.command, exc)
        return EXIT_NUMERIC
    except InvalidArgumentError as exc:
        log.error("invalid input: %s", exc)
        return EXIT_INPUT
    for rep in reports:
        print(rep.to_json() if isinstance(rep, RunReport) else json.dumps(rep, sort_keys=True))
    return code


if __name__ == "__main__":
    sys.exit(main())
