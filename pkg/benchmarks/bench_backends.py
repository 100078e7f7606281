"""Time the compiled lattice kernels against the numpy fallback.

    python3 benchmarks/bench_backends.py [--repeat 3]
"""

import argparse
import time

import numpy as np

from fraclab import kernels
from fraclab.fields import Grid, TestFunctionSpec, sample
from fraclab.norms import gagliardo_seminorm, holder_seminorm
from fraclab.quadrature import quad_nabla

CASES = [
    ("quad_nabla n=1 N=1024", lambda: quad_nabla(_field(1, 12.0, 1024), 0.5)),
    ("quad_nabla n=2 N=64", lambda: quad_nabla(_field(2, 6.0, 64), 0.5)),
    ("gagliardo p=1.5 n=1 N=2048", lambda: gagliardo_seminorm(_field(1, 12.0, 2048), 0.4, 1.5)),
    ("holder n=2 N=48", lambda: holder_seminorm(_field(2, 6.0, 48), 0.5)),
]


def _field(n, L, N):
    return sample(TestFunctionSpec("gaussian_derivative"), Grid(n, L, N))


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _as_array(out):
    if hasattr(out, "stack"):
        return out.stack()
    return np.asarray(out, dtype=float)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not kernels.HAVE_COMPILED:
        print("compiled kernels not built; only the fallback can be timed")
    print(f"{'case':32s} {'compiled s':>11s} {'python s':>10s} {'speedup':>8s} {'max rel diff':>13s}")
    for name, fn in CASES:
        kernels.use_backend("python")
        tp, ref = best_of(fn, args.repeat)
        if kernels.HAVE_COMPILED:
            kernels.use_backend("compiled")
            tc, out = best_of(fn, args.repeat)
            a, b = _as_array(out), _as_array(ref)
            diff = float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
            print(f"{name:32s} {tc:11.4f} {tp:10.4f} {tp / tc:8.1f} {diff:13.2e}")
        else:
            print(f"{name:32s} {'-':>11s} {tp:10.4f} {'-':>8s} {'-':>13s}")
    if kernels.HAVE_COMPILED:
        kernels.use_backend("compiled")


if __name__ == "__main__":
    main()
