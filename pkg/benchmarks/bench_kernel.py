"""Compare the compiled mod-p kernel against the pure-Python fallback.

Run:  python benchmarks/bench_kernel.py

Times the dense row reduction on synthetic matrices and on the real
workload (the degree-4 group-algebra rank ladder for a parameter-free
solution and for B1), with both kernels.
"""

import time

import numpy as np


def bench_rref(sizes, p, kernels):
    rng = np.random.default_rng(7)
    print(f"\nrref_mod over GF({p})")
    print(f"{'shape':>14s}  " + "  ".join(f"{name:>10s}" for name, _ in kernels))
    for rows, cols in sizes:
        m = rng.integers(0, p, size=(rows, cols)).astype(np.int64)
        # plant rank deficiency like the real relation images
        m[rows // 2 :] = (m[: rows - rows // 2] * 3 + m[:rows - rows // 2]) % p
        times = []
        ranks = set()
        for _, fn in kernels:
            work = m.copy()
            t0 = time.perf_counter()
            rank, _ = fn(work, p)
            times.append(time.perf_counter() - t0)
            ranks.add(rank)
        assert len(ranks) == 1, "kernels disagree"
        print(
            f"{rows:>6d}x{cols:<6d}  "
            + "  ".join(f"{t:>9.3f}s" for t in times)
            + f"   rank={ranks.pop()}"
        )


def bench_group_ladder():
    from qgl3.catalog import SolutionData, load
    from qgl3.poincare import dims_modular, group_span

    catalog = load()
    print("\ndegree-4 group-algebra dimension ladder (3 points each)")
    for sid in ("A2", "C1", "B1"):
        data = SolutionData.from_record(catalog.get(sid))
        span = group_span(data)
        t0 = time.perf_counter()
        res = dims_modular(span, 4, data, seed=0)
        dt = time.perf_counter() - t0
        print(f"  {sid}: dims={res.dims} agreement={res.agreement}  {dt:6.2f}s  [{res.method}]")


def main():
    from qgl3._kernel import KERNEL, fallback

    kernels = [("python", fallback.rref_mod)]
    if KERNEL == "cython":
        from qgl3._kernel import _modp

        kernels.insert(0, ("cython", _modp.rref_mod))
    else:
        print("compiled kernel not available; benchmarking the fallback only")
    from qgl3.modular import primes_1_mod

    p = primes_1_mod(36, 1)[0]
    bench_rref([(486, 405), (972, 729), (2916, 1485)], p, kernels)
    print(f"\nactive kernel for the ladder: {KERNEL}"
          f" (set QGL3_PURE_KERNEL=1 to force the fallback)")
    bench_group_ladder()


if __name__ == "__main__":
    main()
