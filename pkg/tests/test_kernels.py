import numpy as np
import pytest
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra
from scipy.spatial.distance import cdist

from legendrian import _backend

BACKENDS = _backend.available()


def sparse_poly(rng, size, lo, hi):
    deg = np.sort(rng.choice(np.arange(lo, hi), size=size, replace=False)).astype(np.int64)
    return deg, rng.normal(size=size) + 1j * rng.normal(size=size)


def dense(deg, coef, lo, hi):
    out = np.zeros(hi - lo + 1, complex)
    out[deg - lo] = coef
    return out


@pytest.mark.parametrize("name", BACKENDS)
def test_convolve_matches_numpy(name, rng):
    k = _backend.get(name)
    for _ in range(20):
        da, ca = sparse_poly(rng, 12, -10, 30)
        db, cb = sparse_poly(rng, 7, -5, 15)
        deg, coef = k.sparse_convolve(da, ca, db, cb)
        lo = int(da[0] + db[0])
        ref = np.convolve(dense(da, ca, da[0], da[-1]), dense(db, cb, db[0], db[-1]))
        got = dense(deg, coef, lo, lo + ref.size - 1)
        assert np.abs(got - ref).max() <= 1e-13 * np.abs(ref).max()


@pytest.mark.parametrize("name", BACKENDS)
def test_eval_matches_powers(name, rng):
    k = _backend.get(name)
    deg, coef = sparse_poly(rng, 10, -6, 25)
    z = np.exp(1j * rng.uniform(0, 2 * np.pi, 64)) * rng.uniform(0.5, 1.5, 64)
    ref = (coef[None, :] * z[:, None] ** deg[None, :]).sum(axis=1)
    assert np.abs(k.sparse_eval(deg, coef, z) - ref).max() <= 1e-12 * np.abs(ref).max()


@pytest.mark.parametrize("name", BACKENDS)
def test_dijkstra_matches_scipy(name, rng):
    k = _backend.get(name)
    n = 200
    rows = rng.integers(0, n, 1500)
    cols = rng.integers(0, n, 1500)
    keep = rows != cols
    g = csr_matrix((rng.uniform(0.1, 1, keep.sum()), (rows[keep], cols[keep])), shape=(n, n))
    g.sum_duplicates()
    got = k.dijkstra_csr(g.indptr.astype(np.int64), g.indices.astype(np.int64), g.data, 0)
    ref = dijkstra(g, indices=0)
    assert np.array_equal(np.isinf(got), np.isinf(ref))
    fin = np.isfinite(ref)
    assert np.allclose(got[fin], ref[fin], rtol=1e-14, atol=0)


@pytest.mark.parametrize("name", BACKENDS)
def test_min_pair_gap_matches_brute_force(name, rng):
    k = _backend.get(name)
    params = rng.normal(size=300) + 1j * rng.normal(size=300)
    values = rng.normal(size=(300, 3)) + 1j * rng.normal(size=(300, 3))
    gap, sep, adm = k.min_pair_gap(params, values, 0.5)
    s = np.abs(params[:, None] - params[None, :])
    d = cdist(values.view(float).reshape(300, 6), values.view(float).reshape(300, 6))
    ok = np.triu(s >= 0.5, 1)
    assert gap == pytest.approx(d[ok].min(), rel=1e-12)
    assert adm == pytest.approx(s[ok].min(), rel=1e-12)
    i, j = np.argwhere(ok & (d == d[ok].min()))[0]
    assert sep == pytest.approx(s[i, j], rel=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_agree(rng):
    py, cy = _backend.get("python"), _backend.get("cython")
    da, ca = sparse_poly(rng, 40, -20, 200)
    db, cb = sparse_poly(rng, 30, 0, 100)
    d1, c1 = py.sparse_convolve(da, ca, db, cb)
    d2, c2 = cy.sparse_convolve(da, ca, db, cb)
    assert np.array_equal(d1, d2) and np.allclose(c1, c2, rtol=1e-14, atol=1e-14)
    z = rng.normal(size=100) + 1j * rng.normal(size=100)
    assert np.allclose(py.sparse_eval(da, ca, z), cy.sparse_eval(da, ca, z), rtol=1e-12)


def test_backend_switching():
    previous = _backend.current()
    try:
        _backend.use_backend("python")
        assert _backend.current() == "python" and _backend.get() is _backend.get("python")
        with pytest.raises(ValueError):
            _backend.use_backend("fortran")
    finally:
        _backend.use_backend(previous)
