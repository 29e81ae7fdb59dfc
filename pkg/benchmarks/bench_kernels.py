"""Compare the numba kernels with their numpy twins.

    python benchmarks/bench_kernels.py [--n 1000000] [--repeat 5]

Both backends are imported directly, so the TAUNETS_DISABLE_NUMBA flag does
not matter here.  Timings exclude the first (compiling) call.
"""

import argparse
import math
import timeit

import numpy as np

from taunets._kernels import _numba, _numpy


def inputs(n, seed=0):
    rng = np.random.default_rng(seed)
    ln_eps = -math.log(2.0) * rng.uniform(4, 40, size=n)
    r = np.exp(rng.uniform(math.log(0.25), 6 * 40 * math.log(2.0), size=n))
    r[: n // 4] = rng.uniform(0.0, 1.2, size=n // 4)
    X = rng.normal(size=(n, 2))
    X *= (r / np.hypot(X[:, 0], X[:, 1]))[:, None]
    sa = rng.choice([-1.0, 0.0, 1.0], size=n)
    sb = rng.choice([-1.0, 1.0], size=n)
    la = rng.normal(scale=50.0, size=n)
    lb = rng.normal(scale=50.0, size=n)
    return {
        "slog_add": (sa, la, sb, lb),
        "sigma": (r,),
        "log_u": (r, ln_eps),
        "u_values": (r, ln_eps),
        "grad_u": (X, ln_eps),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    data = inputs(args.n)
    print(f"{'kernel':<10} {'numpy [ms]':>11} {'numba [ms]':>11} {'speedup':>8}  max|diff|")
    for name, a in data.items():
        f_np, f_nb = getattr(_numpy, name), getattr(_numba, name)
        out_np, out_nb = f_np(*a), f_nb(*a)  # warm-up and agreement check
        if not isinstance(out_np, tuple):
            out_np, out_nb = (out_np,), (out_nb,)
        diff = max(
            float(np.nanmax(np.abs(np.where(np.isfinite(p) & np.isfinite(q), p - q, 0.0))))
            for p, q in zip(out_np, out_nb)
        )
        t_np = min(timeit.repeat(lambda: f_np(*a), number=1, repeat=args.repeat)) * 1e3
        t_nb = min(timeit.repeat(lambda: f_nb(*a), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:<10} {t_np:11.2f} {t_nb:11.2f} {t_np / t_nb:8.2f}  {diff:.3g}")


if __name__ == "__main__":
    main()
