"""Compare the numba and numpy kernel backends.

Times the three hot paths behind the mod-ell lane: truncated
convolution, series inversion, and the full product expansion that
stacks them. Each measurement is the best of --repeats runs; kernel
compilation happens before any clock starts.

The conv row uses dense random operands, which favor numpy's C
convolution; the numba kernel skips zero rows, which is where the
sparse pentagonal factors of a real expansion live. The expand row is
the one that reflects library workloads.

Usage: python3 benchmarks/bench_backends.py [--sizes 2000,20000,100000]
"""
import argparse
import sys
import time

import numpy as np

from etaq import ProductSpec, backend, expand_product
from etaq.kernels import conv_trunc, inv_series, warm_up


def best_of(repeats, fn):
    out = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        out.append(time.perf_counter() - t0)
    return min(out)


def run_backend(name, sizes, repeats, ell):
    backend.set_backend(name)
    warm_up()
    spec = ProductSpec.parse("1^-1 2^-1")
    rng = np.random.default_rng(12345)
    rows = {}
    for n in sizes:
        u = rng.integers(0, ell, size=n, dtype=np.int64)
        u[0] = 1
        v = rng.integers(0, ell, size=n, dtype=np.int64)
        # untimed first calls so numba compilation is not billed
        conv_trunc(u, v, n, ell)
        inv_series(u, n, ell)
        expand_product(spec, n, ell)
        rows[n] = (
            best_of(repeats, lambda: conv_trunc(u, v, n, ell)),
            best_of(repeats, lambda: inv_series(u, n, ell)),
            best_of(repeats, lambda: expand_product(spec, n, ell)),
        )
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="2000,20000",
                    help="comma-separated series lengths")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--modulus", type=int, default=13)
    args = ap.parse_args(argv)
    sizes = [int(tok) for tok in args.sizes.split(",")]

    prev = backend.requested_backend()
    try:
        results = {}
        for name in ("numpy", "numba"):
            try:
                results[name] = run_backend(name, sizes, args.repeats, args.modulus)
            except RuntimeError as exc:
                print(f"skipping {name}: {exc}", file=sys.stderr)
    finally:
        backend.set_backend(prev)

    labels = ["conv", "inverse", "expand"]
    print(f"modulus {args.modulus}, best of {args.repeats}")
    header = f"{'n':>8} {'kernel':>8} " + "".join(f"{b:>12}" for b in results)
    if len(results) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for n in sizes:
        for i, label in enumerate(labels):
            cells = [results[b][n][i] for b in results]
            line = f"{n:>8} {label:>8} " + "".join(f"{c * 1e3:>10.2f}ms" for c in cells)
            if len(cells) == 2 and cells[1] > 0:
                line += f"{cells[0] / cells[1]:>9.1f}x"
            print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
