"""Compare the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--threads N]

Times each hot loop on both backends, checks that they agree, and then
times the three worked examples end to end under each backend.
"""

from __future__ import annotations

import argparse
import os
import statistics
import time

import numpy as np

from linkframe import kernels, link_exact, link_numeric, paper_example, sample


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def kernel_cases(rng: np.random.Generator):
    X, DX, Y, DY = rng.normal(size=(4, 2000, 3))
    Y += 6.0
    wx, wy = rng.random((2, 2000))
    P = sample(paper_example("framing_one", 0.1).first, 1500).vertices
    Q = sample(paper_example("framing_one", 0.1).second, 1500).vertices
    return {
        "gauss_sum 2000x2000": lambda b: kernels.gauss_sum(X, DX, wx, Y, DY, wy, backend=b)[0],
        "solid_angle 1500x1500": lambda b: kernels.solid_angle_matrix(P, Q, backend=b),
        "segment_distance 1500x1500": lambda b: kernels.segment_distance_matrix(P, Q, backend=b),
    }


def end_to_end():
    return {
        "link_numeric framing_zero": lambda: link_numeric(paper_example("framing_zero")),
        "link_numeric framing_one eps=0.05": lambda: link_numeric(paper_example("framing_one", 0.05)),
        "link_exact circles 1024 vertices": lambda: link_exact(
            sample(paper_example("framing_one", 1.0).first, 1024),
            sample(paper_example("framing_one", 1.0).second, 1024)),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--threads", type=int, default=None, help="sets LINKFRAME_THREADS")
    args = ap.parse_args(argv)
    if args.threads:
        os.environ["LINKFRAME_THREADS"] = str(args.threads)

    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}   threads: {kernels.thread_count()}")
    if "cython" not in backends:
        print("compiled extension not built; only the fallback is timed")

    rng = np.random.default_rng(0)
    print(f"\n{'kernel':36s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in kernel_cases(rng).items():
        outs = {b: np.asarray(fn(b)) for b in backends}
        ref = outs["python"]
        for b, v in outs.items():
            assert np.allclose(v, ref, rtol=1e-11, atol=1e-12), f"{name}: {b} disagrees with python"
        t = {b: best_of(lambda: fn(b), args.repeat) for b in backends}
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{name:36s}" + "".join(f"{t[b] * 1e3:10.1f}ms" for b in backends) + f"{speed:9.1f}x")

    print(f"\n{'end to end':36s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in end_to_end().items():
        t = {}
        for b in backends:
            kernels.BACKEND = b
            t[b] = statistics.median([best_of(fn, 1) for _ in range(max(1, args.repeat // 2))])
        speed = t["python"] / t["cython"] if "cython" in t else float("nan")
        print(f"{name:36s}" + "".join(f"{t[b] * 1e3:10.1f}ms" for b in backends) + f"{speed:9.1f}x")
    kernels.BACKEND = kernels.default_backend()


if __name__ == "__main__":
    main()
