# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. ``_pykernels`` holds the reference twins."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, INFINITY

cnp.import_array()

ctypedef double complex cplx

cdef double TRIM = 1e-300
cdef Py_ssize_t DENSE_LIMIT = 1 << 24


cdef inline cplx ipow(cplx z, long long k) noexcept nogil:
    cdef cplx r = 1.0
    cdef cplx b = z
    if k < 0:
        b = 1.0 / z
        k = -k
    while k:
        if k & 1:
            r = r * b
        b = b * b
        k >>= 1
    return r


def sparse_convolve(const cnp.int64_t[::1] da, const cplx[::1] ca,
                    const cnp.int64_t[::1] db, const cplx[::1] cb):
    """Product of two sparse Laurent coefficient lists (sorted degrees)."""
    cdef Py_ssize_t na = da.shape[0], nb = db.shape[0]
    cdef Py_ssize_t i, j, k, span, nout
    cdef cnp.int64_t lo
    if na == 0 or nb == 0:
        return np.empty(0, np.int64), np.empty(0, np.complex128)
    lo = da[0] + db[0]
    span = <Py_ssize_t>(da[na - 1] + db[nb - 1] - lo + 1)
    if span > DENSE_LIMIT and span > 8 * na * nb:
        # very sparse, very wide: fall back to the sort-and-reduce path
        from ._pykernels import sparse_convolve as _py
        return _py(np.asarray(da), np.asarray(ca), np.asarray(db), np.asarray(cb))
    acc_arr = np.zeros(span, np.complex128)
    mark_arr = np.zeros(span, np.uint8)
    cdef cplx[::1] acc = acc_arr
    cdef cnp.uint8_t[::1] mark = mark_arr
    cdef cplx a
    with nogil:
        for i in range(na):
            a = ca[i]
            for j in range(nb):
                k = <Py_ssize_t>(da[i] + db[j] - lo)
                acc[k] = acc[k] + a * cb[j]
                mark[k] = 1
        nout = 0
        for k in range(span):
            if mark[k] and (acc[k].real >= TRIM or acc[k].real <= -TRIM
                            or acc[k].imag >= TRIM or acc[k].imag <= -TRIM):
                nout += 1
            else:
                mark[k] = 0
    deg_arr = np.empty(nout, np.int64)
    out_arr = np.empty(nout, np.complex128)
    cdef cnp.int64_t[::1] dout = deg_arr
    cdef cplx[::1] cout = out_arr
    j = 0
    for k in range(span):
        if mark[k]:
            dout[j] = lo + k
            cout[j] = acc[k]
            j += 1
    return deg_arr, out_arr


def sparse_eval(const cnp.int64_t[::1] deg, const cplx[::1] coef, const cplx[::1] z):
    """Sparse Horner evaluation of sum_k coef[k] * z**deg[k] at every point."""
    cdef Py_ssize_t n = deg.shape[0], m = z.shape[0], i, p
    out_arr = np.zeros(m, np.complex128)
    cdef cplx[::1] out = out_arr
    cdef cplx acc, zz
    if n == 0:
        return out_arr
    with nogil:
        for p in range(m):
            zz = z[p]
            acc = coef[n - 1]
            i = n - 1
            while i > 0:
                acc = acc * ipow(zz, deg[i] - deg[i - 1]) + coef[i - 1]
                i -= 1
            if deg[0] != 0:
                acc = acc * ipow(zz, deg[0])
            out[p] = acc
    return out_arr


def dijkstra_csr(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                 const double[::1] weights, Py_ssize_t source):
    """Single-source shortest paths on a CSR graph (binary heap, lazy deletion)."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef Py_ssize_t cap = indices.shape[0] + n + 1
    dist_arr = np.full(n, np.inf)
    cdef double[::1] dist = dist_arr
    heap_d_arr = np.empty(cap, np.float64)
    heap_v_arr = np.empty(cap, np.int64)
    done_arr = np.zeros(n, np.uint8)
    cdef double[::1] hd = heap_d_arr
    cdef cnp.int64_t[::1] hv = heap_v_arr
    cdef cnp.uint8_t[::1] done = done_arr
    cdef Py_ssize_t size = 0, pos, child, parent, e
    cdef double d, nd, td
    cdef cnp.int64_t v, w, tv
    with nogil:
        dist[source] = 0.0
        hd[0] = 0.0
        hv[0] = source
        size = 1
        while size > 0:
            d = hd[0]
            v = hv[0]
            size -= 1
            if size > 0:
                td = hd[size]
                tv = hv[size]
                pos = 0
                while True:
                    child = 2 * pos + 1
                    if child >= size:
                        break
                    if child + 1 < size and hd[child + 1] < hd[child]:
                        child += 1
                    if hd[child] < td:
                        hd[pos] = hd[child]
                        hv[pos] = hv[child]
                        pos = child
                    else:
                        break
                hd[pos] = td
                hv[pos] = tv
            if done[v]:
                continue
            done[v] = 1
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                nd = d + weights[e]
                if nd < dist[w]:
                    dist[w] = nd
                    pos = size
                    size += 1
                    while pos > 0:
                        parent = (pos - 1) // 2
                        if hd[parent] > nd:
                            hd[pos] = hd[parent]
                            hv[pos] = hv[parent]
                            pos = parent
                        else:
                            break
                    hd[pos] = nd
                    hv[pos] = w
    return dist_arr


def min_pair_gap(const cplx[::1] params, const cplx[:, ::1] values, double min_sep):
    """Smallest image gap over parameter pairs at least ``min_sep`` apart.

    Returns ``(min_gap, sep_at_min, min_admissible_sep)``.
    """
    cdef Py_ssize_t m = params.shape[0], dim = values.shape[1], i, j, k
    cdef double sep, gap, best = INFINITY, best_sep = INFINITY, min_adm = INFINITY
    cdef double dr, di
    with nogil:
        for i in range(m):
            for j in range(i + 1, m):
                dr = params[i].real - params[j].real
                di = params[i].imag - params[j].imag
                sep = sqrt(dr * dr + di * di)
                if sep < min_sep:
                    continue
                if sep < min_adm:
                    min_adm = sep
                gap = 0.0
                for k in range(dim):
                    dr = values[i, k].real - values[j, k].real
                    di = values[i, k].imag - values[j, k].imag
                    gap += dr * dr + di * di
                gap = sqrt(gap)
                if gap < best:
                    best = gap
                    best_sep = sep
    return best, best_sep, min_adm
