"""Pure-Python (NumPy) versions of the compiled kernels in ``_kernels.pyx``.

Signatures and results match the compiled module; these are selected when the
extension is unavailable and serve as the reference in the benchmark.
"""
import heapq

import numpy as np

TRIM = 1e-300


def _keep(c):
    return (np.abs(c.real) >= TRIM) | (np.abs(c.imag) >= TRIM)


def sparse_convolve(da, ca, db, cb):
    """Product of two sparse Laurent coefficient lists (sorted degrees)."""
    if len(da) == 0 or len(db) == 0:
        return np.empty(0, np.int64), np.empty(0, np.complex128)
    degs = (da[:, None] + db[None, :]).ravel()
    vals = (ca[:, None] * cb[None, :]).ravel()
    lo = int(da[0] + db[0])
    span = int(da[-1] + db[-1]) - lo + 1
    if span <= max(1 << 20, 8 * degs.size):
        idx = degs - lo
        re = np.bincount(idx, weights=vals.real, minlength=span)
        im = np.bincount(idx, weights=vals.imag, minlength=span)
        touched = np.bincount(idx, minlength=span) > 0
        out = re + 1j * im
        mask = touched & _keep(out)
        return np.nonzero(mask)[0].astype(np.int64) + lo, out[mask]
    uniq, inv = np.unique(degs, return_inverse=True)
    re = np.bincount(inv, weights=vals.real, minlength=uniq.size)
    im = np.bincount(inv, weights=vals.imag, minlength=uniq.size)
    out = re + 1j * im
    mask = _keep(out)
    return uniq[mask].astype(np.int64), out[mask]


def _ipow(z, k):
    # exponentiation by squaring keeps integer powers exact-ish for complex input
    if k < 0:
        z = 1.0 / z
        k = -k
    result = np.ones_like(z)
    base = z
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def sparse_eval(deg, coef, z):
    """Sparse Horner evaluation of sum_k coef[k] * z**deg[k] at every point."""
    z = np.asarray(z, dtype=np.complex128)
    n = len(deg)
    if n == 0:
        return np.zeros(z.shape, np.complex128)
    acc = np.full(z.shape, coef[n - 1], dtype=np.complex128)
    for i in range(n - 1, 0, -1):
        gap = int(deg[i] - deg[i - 1])
        acc = acc * (z if gap == 1 else _ipow(z, gap)) + coef[i - 1]
    if deg[0] != 0:
        acc = acc * _ipow(z, int(deg[0]))
    return acc


def dijkstra_csr(indptr, indices, weights, source):
    """Single-source shortest paths on a CSR graph."""
    n = len(indptr) - 1
    dist = [float("inf")] * n
    dist[source] = 0.0
    done = [False] * n
    heap = [(0.0, source)]
    indptr = indptr.tolist()
    indices = indices.tolist()
    weights = weights.tolist()
    while heap:
        d, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            nd = d + weights[e]
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, w))
    return np.array(dist)


def min_pair_gap(params, values, min_sep, block=512):
    """Smallest image gap over parameter pairs at least ``min_sep`` apart.

    Returns ``(min_gap, sep_at_min, min_admissible_sep)``.
    """
    m = len(params)
    best, best_sep, min_adm = np.inf, np.inf, np.inf
    for start in range(0, m, block):
        p = params[start:start + block]
        v = values[start:start + block]
        sep = np.abs(p[:, None] - params[None, :])
        gap = np.linalg.norm(v[:, None, :] - values[None, :, :], axis=2)
        rows = np.arange(start, start + len(p))[:, None]
        ok = (np.arange(m)[None, :] > rows) & (sep >= min_sep)
        if not ok.any():
            continue
        min_adm = min(min_adm, sep[ok].min())
        g = np.where(ok, gap, np.inf)
        k = np.unravel_index(np.argmin(g), g.shape)
        if g[k] < best:
            best, best_sep = float(g[k]), float(sep[k])
    return float(best), float(best_sep), float(min_adm)
