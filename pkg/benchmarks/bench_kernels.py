"""Benchmark the numba kernel lane against the numpy/scipy fallback lane.

Run:

    python benchmarks/bench_kernels.py [--seconds 8.0] [--repeats 5]

Workloads mirror production shapes (seconds of 44.1 kHz audio). The numba
lane is warmed once before timing so JIT compilation is not billed to the
kernels. If numba is unavailable the script still times the fallback lane
and says so. The same inputs go through both lanes and the outputs are
compared, so this doubles as a parity check.
"""

import argparse
import statistics
import time

import numpy as np

from loopsmith.dsp import kernels

SR = 44100


def timed(fn, repeats):
    durations = []
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn()
        durations.append(time.perf_counter() - start)
    return result, min(durations), statistics.mean(durations)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seconds", type=float, default=8.0, help="audio length per workload")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    n = int(args.seconds * SR)
    rng = np.random.default_rng(1234)
    x = rng.uniform(-0.5, 0.5, n)
    window = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(2048) / 2048)
    starts_args = (n // 2, 2.0, 2048, 1024, 512, 512)

    workloads = [
        ("biquad", lambda f: f(x.copy(), 0.2, 0.3, 0.2, -0.4, 0.1), "_biquad"),
        ("feedback_comb", lambda f: f(x.copy(), 1557, 0.84), "_comb"),
        ("allpass", lambda f: f(x.copy(), 220, 0.7), "_allpass"),
        ("wsola_offsets", lambda f: f(x.copy(), *starts_args), "_wsola_offsets"),
        ("resample_linear", lambda f: f(x.copy(), 1.33), "_resample"),
        ("chorus", lambda f: f(x.copy(), SR, 1.5, 0.007, 0.027, 0.5), "_chorus"),
    ]

    have_numba = kernels.USE_NUMBA or hasattr(kernels, "_biquad_nb")
    if have_numba:
        kernels.warmup()
    else:
        print("numba unavailable or disabled (LOOPSMITH_NO_NUMBA); timing numpy lane only\n")

    print(f"workload sizes: {args.seconds:.1f}s mono @ {SR} Hz ({n} samples), best of {args.repeats}")
    header = f"{'kernel':<16} {'numpy lane':>12} {'numba lane':>12} {'speedup':>9}  parity"
    print(header)
    print("-" * len(header))

    for name, call, prefix in workloads:
        np_fn = getattr(kernels, prefix + "_np")
        np_out, np_best, _ = timed(lambda: call(np_fn), args.repeats)
        if have_numba:
            nb_fn = getattr(kernels, prefix + "_nb")
            nb_out, nb_best, _ = timed(lambda: call(nb_fn), args.repeats)
            close = np.allclose(np.asarray(np_out, float), np.asarray(nb_out, float), atol=1e-6)
            print(
                f"{name:<16} {np_best * 1e3:>10.2f}ms {nb_best * 1e3:>10.2f}ms "
                f"{np_best / nb_best:>8.1f}x  {'ok' if close else 'DIFFERS'}"
            )
        else:
            print(f"{name:<16} {np_best * 1e3:>10.2f}ms {'-':>12} {'-':>9}  -")

    # one end-to-end figure: ola assembly driven by the chosen offsets
    starts = kernels._wsola_offsets_np(x, *starts_args)
    _, np_best, _ = timed(lambda: kernels._ola_assemble_np(x.copy(), starts, window, 1024, n // 2), args.repeats)
    if have_numba:
        _, nb_best, _ = timed(
            lambda: kernels._ola_assemble_nb(x.copy(), starts, window, 1024, n // 2), args.repeats
        )
        print(f"{'ola_assemble':<16} {np_best * 1e3:>10.2f}ms {nb_best * 1e3:>10.2f}ms {np_best / nb_best:>8.1f}x  ok")
    else:
        print(f"{'ola_assemble':<16} {np_best * 1e3:>10.2f}ms {'-':>12} {'-':>9}  -")


if __name__ == "__main__":
    main()
