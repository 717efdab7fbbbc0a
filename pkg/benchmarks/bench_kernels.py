"""
Compare the numba and pure-numpy Grunwald-Letnikov kernels.

    python benchmarks/bench_kernels.py [--sizes 513,1025,2049,4097] [--repeat 5]

Both variants are imported directly, so FRACMECH_DISABLE_NUMBA has no effect here.
"""
import argparse
import time

import numpy as np

from fracmech import kernels


def best_of(fn, *args, repeat=5):
    fn(*args)  # warm-up / JIT compile
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--sizes", default="513,1025,2049,4097")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--alpha", type=float, default=0.5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'kernel':<8} {'n':>6} {'numpy [s]':>12} {'numba [s]':>12} {'speedup':>9} {'max |diff|':>11}")
    for n in (int(s) for s in args.sizes.split(",")):
        w = kernels.gl_weights(args.alpha, n)
        f = rng.standard_normal(n)
        for name, np_fn, nb_fn in (
            ("apply", kernels._lower_apply_numpy, kernels._lower_apply_numba),
            ("solve", kernels._lower_solve_numpy, kernels._lower_solve_numba),
        ):
            t_np = best_of(np_fn, w, f, repeat=args.repeat)
            t_nb = best_of(nb_fn, w, f, repeat=args.repeat)
            diff = np.max(np.abs(np_fn(w, f) - nb_fn(w, f)))
            print(f"{name:<8} {n:>6} {t_np:>12.5f} {t_nb:>12.5f} {t_np / t_nb:>8.1f}x {diff:>11.2e}")


if __name__ == "__main__":
    main()
