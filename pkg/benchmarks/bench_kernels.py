"""Time the numba kernels against the numpy fallbacks on matrices of the
shapes that come up for quadric ideals in 4 to 6 variables.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]
"""

import argparse
import random
import time

import numpy as np

from quadrics import _kernels
from quadrics.exact import random_prime
from quadrics.gradedla import mult_table, space_dim


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(rng, p):
    gen = np.random.default_rng(rng.randrange(2**32))
    for d, t, k in ((4, 4, 60), (5, 4, 140), (5, 5, 200), (6, 4, 260), (6, 5, 400)):
        n = space_dim(d, t)
        rows = gen.integers(0, p, size=(k, n), dtype=np.int64)
        # low rank block so the elimination does real work before filling up
        rows[k // 2 :] = (rows[: k - k // 2] * 3 + rows[: k - k // 2] * 5) % p
        yield f"echelon d={d} t={t} {k}x{n}", lambda r=rows, b=None: _kernels.echelon(r, p, backend=b)
    for d, a in ((5, 2), (6, 2), (6, 3)):
        na = space_dim(d, a)
        u = gen.integers(0, p, size=(na - 1, na), dtype=np.int64)
        table = mult_table(d, a, a)
        ii, jj = np.triu_indices(u.shape[0])
        pairs = np.stack([ii, jj], axis=1).astype(np.int64)
        n_out = space_dim(d, 2 * a)
        yield f"products d={d} deg {a}x{a} ({len(pairs)} pairs)", lambda u=u, pairs=pairs, table=table, n_out=n_out, b=None: _kernels.pair_products(u, u, pairs, table, n_out, p, backend=b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or QUADRICS_NO_NUMBA set); timing numpy only")
    rng = random.Random(args.seed)
    p = random_prime(rng)
    print(f"prime {p}")
    print(f"{'case':<42} {'numpy s':>10} {'numba s':>10} {'speedup':>8}")
    for name, fn in cases(rng, p):
        t_np, out_np = _best(lambda: fn(b="numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            fn(b="numba")  # compile
            t_nb, out_nb = _best(lambda: fn(b="numba"), args.repeat)
            a = out_np if isinstance(out_np, tuple) else (out_np,)
            b = out_nb if isinstance(out_nb, tuple) else (out_nb,)
            same = all(np.array_equal(x, y) for x, y in zip(a[:2], b[:2]))
            flag = "" if same else "  MISMATCH"
            print(f"{name:<42} {t_np:>10.4f} {t_nb:>10.4f} {t_np / t_nb:>7.1f}x{flag}")
        else:
            print(f"{name:<42} {t_np:>10.4f} {'-':>10} {'-':>8}")


if __name__ == "__main__":
    main()
