"""Numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--n 8 --batch 4096 --repeat 5]

Checks that both backends give identical results before timing them.
The first numba call includes compilation and is excluded from the timings.
"""

import argparse
import time

import numpy as np

from fo3pdl import _kernels


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads(n, batch, rng):
    a = rng.random((batch, n, n)) < 0.3
    b = rng.random((batch, n, n)) < 0.3
    single = rng.random((n, n)) < 0.3
    return {
        "compose": lambda: _kernels.compose(a, b),
        "c_op(3)": lambda: _kernels.c_op(a, 3),
        "ip_batch": lambda: _kernels.ip_batch(a),
        "ip_forward x256": lambda: [_kernels.ip_forward(single) for _ in range(256)],
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=8)
    ap.add_argument("--batch", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        print("numba unavailable; nothing to compare")
        return 1
    rng = np.random.default_rng(args.seed)
    jobs = workloads(args.n, args.batch, rng)
    print(f"n={args.n} batch={args.batch} best of {args.repeat}")
    print(f"{'kernel':<18}{'numpy ms':>10}{'numba ms':>10}{'speedup':>9}")
    for name, fn in jobs.items():
        _kernels.set_backend(False)
        ref = fn()
        t_np = _best(fn, args.repeat)
        _kernels.set_backend(True)
        got = fn()  # compiles
        if not all(np.array_equal(x, y) for x, y in zip(np.atleast_1d(ref), np.atleast_1d(got))):
            raise SystemExit(f"{name}: backends disagree")
        t_nb = _best(fn, args.repeat)
        print(f"{name:<18}{t_np * 1e3:>10.2f}{t_nb * 1e3:>10.2f}{t_np / t_nb:>8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
