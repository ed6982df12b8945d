"""Benchmark the JIT kernels against their pure-numpy twins.

Run:  python benchmarks/bench_accel.py
The same module-level flag (PARAHAAR_NO_NUMBA=1) that selects the fallback
in the package is what this script measures against.
"""

import time

import numpy as np

from parahaar import accel


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm-up (JIT compilation for the numba path)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    print(f"numba available and active: {accel.HAVE_NUMBA}")

    n = 200_000
    re = rng.standard_normal(n)
    im = rng.standard_normal(n)
    w = rng.uniform(0.1, 2.0, n)
    args = (re, im, w, 0.6, 0.8, 0.1, -0.2, 1e-12)
    t_jit = timeit(accel.quadrant_masses_kernel, *args)
    t_np = timeit(accel.quadrant_masses_numpy, *args)
    assert np.allclose(accel.quadrant_masses_kernel(*args),
                       accel.quadrant_masses_numpy(*args))
    print(f"quadrant masses  n={n}: active {t_jit*1e3:8.2f} ms | numpy {t_np*1e3:8.2f} ms "
          f"| speedup x{t_np / t_jit:.1f}")

    args2 = (re, im, w, 0.6, 0.8, 0.1, -0.2, 0.0)
    t_jit = timeit(accel.side_masses_kernel, *args2)
    t_np = timeit(accel.side_masses_numpy, *args2)
    print(f"side masses      n={n}: active {t_jit*1e3:8.2f} ms | numpy {t_np*1e3:8.2f} ms "
          f"| speedup x{t_np / t_jit:.1f}")

    mids = np.ascontiguousarray(rng.uniform(0, 1, (64, 16, 2)))
    t_jit = timeit(accel.pair_power_weights, mids, 1e-4, 4.0, repeat=3)
    t_np = timeit(accel.pair_power_weights_numpy, mids, 1e-4, 4.0, repeat=3)
    print(f"pair weights 64x16x2: active {t_jit*1e3:8.2f} ms | numpy {t_np*1e3:8.2f} ms "
          f"| speedup x{t_np / t_jit:.1f}")


if __name__ == "__main__":
    main()
