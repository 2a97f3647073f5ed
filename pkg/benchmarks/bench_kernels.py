"""Time the compiled kernels against their NumPy fallbacks.

Usage: python benchmarks/bench_kernels.py [--repeat R]
"""
import argparse
import timeit

import numpy as np

from legendrian import _backend
from legendrian.contact import CurveJet
from legendrian.geometry import MetricGrid, embedding_samples
from legendrian.series import LaurentPoly


def cases(rng):
    da = np.sort(rng.choice(4000, 300, replace=False)).astype(np.int64)
    db = np.sort(rng.choice(4000, 300, replace=False)).astype(np.int64)
    ca = rng.normal(size=300) + 1j * rng.normal(size=300)
    cb = rng.normal(size=300) + 1j * rng.normal(size=300)
    z = np.exp(2j * np.pi * rng.uniform(size=4096))

    f = CurveJet.from_components([LaurentPoly.monomial(1), LaurentPoly.monomial(2), 0])
    grid = MetricGrid(64, 256)
    vals = f(grid.nodes())
    indptr, indices, weights = grid.csr(vals)

    zeta = embedding_samples(2048)
    emb = np.ascontiguousarray(f(zeta))
    return {
        "sparse_convolve 300x300": lambda k: k.sparse_convolve(da, ca, db, cb),
        "sparse_eval 300 terms x 4096": lambda k: k.sparse_eval(da, ca, z),
        "dijkstra 64x256 grid": lambda k: k.dijkstra_csr(indptr, indices, weights, 0),
        "min_pair_gap 2k samples": lambda k: k.min_pair_gap(zeta, emb, 0.1),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)
    names = _backend.available()
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in names) + ("   speedup" if len(names) > 1 else ""))
    for label, fn in cases(rng).items():
        times = []
        for name in names:
            k = _backend.get(name)
            fn(k)
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{label:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times)
        if len(times) > 1:
            row += f"   {times[1] / times[0]:7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
