"""Time the compiled hot kernels against the numpy fallback.

Usage: python3 benchmarks/bench_core.py [--two-s 100 400 800] [--two-j 100]
"""

import argparse
import math
import timeit

import numpy as np

from spincat import _core
from spincat.model import cat_coefficients, log_binomial_root, spin_labels


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--two-s", type=int, nargs="+", default=[100, 400, 800])
    parser.add_argument("--two-j", type=int, default=100)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = _core.available_backends()
    if len(backends) < 2:
        print("# compiled extension not built; only the numpy fallback is available")
    theta, g, two_j = math.pi / 6, 0.01, args.two_j
    log_pref = log_binomial_root(two_j, spin_labels(two_j))
    print(f"{'kernel':<16}{'two_s':>7}" + "".join(f"{name:>14}" for name in backends) + f"{'speedup':>10}")
    for two_s in args.two_s:
        cat = cat_coefficients(two_s)
        w = cat.weights
        u = w.astype(np.complex128)
        t = _core._fallback.kernel_diff_values(two_s, two_j, theta, g)
        amps = _core._fallback.probe_amplitudes(two_s, two_j, theta, g, log_pref)
        jobs = {
            "kernel_values": lambda m: m.kernel_diff_values(two_s, two_j, theta, g),
            "probe_amps": lambda m: m.probe_amplitudes(two_s, two_j, theta, g, log_pref),
            "outcome_sums": lambda m: m.outcome_sums(u, w, t, amps),
        }
        for label, job in jobs.items():
            times = {name: best_of(lambda: job(mod), args.repeat) for name, mod in backends.items()}
            cells = "".join(f"{times[name] * 1e3:>12.3f}ms" for name in backends)
            speed = times["python"] / times["cython"] if "cython" in times else float("nan")
            print(f"{label:<16}{two_s:>7}{cells}{speed:>9.2f}x")


if __name__ == "__main__":
    main()
