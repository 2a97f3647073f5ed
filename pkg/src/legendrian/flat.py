"""Explicit proper Legendrian lines inside affine hyperplanes.

For plane coefficients ``(a_j, b_j)`` with every ``a_j != 0`` and a basepoint
``p0``, the map

    Y_j = y0_j + zeta
    X_j = (x0_j - b_j) exp(zeta / a_j) + b_j
    Z   = z0 + sum_j (a_j x0_j + b_j y0_j - a_j X_j - b_j Y_j)

is a proper holomorphic Legendrian embedding of C through ``p0`` whose image
lies in ``{(z - z0) + sum_j a_j (x_j - x0_j) + b_j (y_j - y0_j) = 0}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .contact import ContactPoint, CurveJet, Disk
from .errors import DegeneratePlane, InputError, NormalDegenerate
from .series import LaurentPoly

TAU_PLANE = 1e-12
TAU_NORMAL = 1e-12


@dataclass(frozen=True)
class FlatPlaneSpec:
    """Plane coefficients ``a``, ``b`` (length n each) and basepoint ``base``."""

    a: tuple
    b: tuple
    base: ContactPoint

    def __post_init__(self):
        a = tuple(complex(v) for v in np.atleast_1d(self.a))
        b = tuple(complex(v) for v in np.atleast_1d(self.b))
        base = self.base if isinstance(self.base, ContactPoint) else ContactPoint(self.base)
        if len(a) != len(b) or len(a) != base.n:
            raise InputError("need n plane coefficient pairs for a point in C^{2n+1}")
        if min(abs(v) for v in a) <= TAU_PLANE:
            raise DegeneratePlane("every a_j must be nonzero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "base", base)

    @property
    def n(self):
        return len(self.a)


class FlatEmbedding:
    """Closed-form evaluator ``zeta -> Psi(scale * zeta)``."""

    def __init__(self, spec, scale=1.0):
        self.spec = spec
        self.scale = complex(scale)
        p = np.asarray(spec.base)
        self._x0, self._y0, self._z0 = p[0:-1:2], p[1:-1:2], p[-1]
        self._a = np.asarray(spec.a)
        self._b = np.asarray(spec.b)

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=np.complex128)
        w = self.scale * zeta[..., None]
        # offset form keeps Psi(0) = p0 bit-exact
        dX = (self._x0 - self._b) * np.expm1(w / self._a)
        out = np.empty(zeta.shape + (2 * self.spec.n + 1,), np.complex128)
        out[..., 0:-1:2] = self._x0 + dX
        out[..., 1:-1:2] = self._y0 + w
        out[..., -1] = self._z0 - np.sum(self._a * dX + self._b * w, axis=-1)
        return out

    def derivative(self, zeta):
        zeta = np.asarray(zeta, dtype=np.complex128)
        w = self.scale * zeta[..., None]
        dX = (self._x0 - self._b) / self._a * np.exp(w / self._a) * self.scale
        dY = np.broadcast_to(self.scale, dX.shape)
        dZ = -np.sum(self._a * dX + self._b * dY, axis=-1)
        out = np.empty(zeta.shape + (2 * self.spec.n + 1,), np.complex128)
        out[..., 0:-1:2], out[..., 1:-1:2], out[..., -1] = dX, dY, dZ
        return out

    def plane_functional(self, q):
        """``(q_z - z0) + sum_j a_j (q_xj - x0_j) + b_j (q_yj - y0_j)``."""
        q = np.asarray(q, dtype=np.complex128)
        return (q[..., -1] - self._z0
                + np.sum(self._a * (q[..., 0:-1:2] - self._x0)
                         + self._b * (q[..., 1:-1:2] - self._y0), axis=-1))

    def eta_residual(self, zeta):
        """``|dZ + sum_j X_j dY_j|`` per point, against ``d zeta``."""
        p, d = self(zeta), self.derivative(zeta)
        return np.abs(d[..., -1] + np.sum(p[..., 0:-1:2] * d[..., 1:-1:2], axis=-1))


def flat_embedding(spec):
    return FlatEmbedding(spec)


def taylor_truncate(emb, degree, radius=1.0):
    """Degree-``degree`` Taylor jet of a flat embedding and a tail bound on ``|zeta| <= radius``.

    Returns ``(CurveJet, bound)`` with
    ``bound = sum_j |x0_j - b_j| (R/|a_j|)**(D+1) exp(R/|a_j|) / (D+1)!``.
    """
    D = int(degree)
    if D < 0:
        raise InputError("degree must be nonnegative")
    spec, s = emb.spec, emb.scale
    comps, bound = [], 0.0
    zsum = LaurentPoly.constant(emb._z0)
    for x0, y0, a, b in zip(emb._x0, emb._y0, emb._a, emb._b):
        k = np.arange(D + 1)
        c = (x0 - b) * np.array([(s / a) ** j / math.factorial(j) for j in k])
        X = LaurentPoly.from_dense(c) + b
        Y = LaurentPoly.constant(y0) + (LaurentPoly.monomial(1, s) if D >= 1 else 0)
        comps += [X, Y]
        zsum = zsum + (a * x0 + b * y0) - X * a - Y * b
        rr = abs(s) * radius / abs(a)
        bound += abs(x0 - b) * rr ** (D + 1) * math.exp(rr) / math.factorial(D + 1)
    return CurveJet.from_components(comps + [zsum], Disk(radius)), float(bound)


# -- families of flat disks along a boundary ------------------------------------

def plane_from_normal(G):
    """Coefficients ``a = conj(G1/G3)``, ``b = conj(G2/G3)`` of the plane orthogonal to ``G``."""
    G = np.asarray(G, dtype=np.complex128)
    scale = np.linalg.norm(G, axis=-1)
    if np.any(np.abs(G[..., 0]) <= TAU_NORMAL * scale) or np.any(np.abs(G[..., 2]) <= TAU_NORMAL * scale):
        raise NormalDegenerate("normal has a vanishing first or last component")
    return np.conj(G[..., 0] / G[..., 2]), np.conj(G[..., 1] / G[..., 2])


def jitter_normals(G, rng, rel=1e-6):
    """Perturb each normal by a random vector of size ``rel * |G|``."""
    G = np.asarray(G, dtype=np.complex128)
    noise = rng.normal(size=G.shape) + 1j * rng.normal(size=G.shape)
    noise /= np.linalg.norm(noise, axis=-1, keepdims=True)
    return G + rel * np.linalg.norm(G, axis=-1, keepdims=True) * noise


def _finite(r):
    # exp overflow for tiny |a| means "far too large", never "unknown"
    return np.where(np.isfinite(r), r, np.inf)


class FlatDiskFamily:
    """One rescaled flat Legendrian disk per boundary sample (n = 1).

    ``disk(v)[k]`` is ``Psi_k(scale_k * v)`` where ``Psi_k`` passes through
    ``base[k]`` inside the plane Hermitian-orthogonal to ``normals[k]``.
    """

    def __init__(self, base, normals, a, b, scale, mu):
        self.base = base
        self.normals = normals
        self.a, self.b = a, b
        self.scale = scale
        self.mu = mu

    def __len__(self):
        return self.base.shape[0]

    def spec(self, k):
        return FlatPlaneSpec((self.a[k],), (self.b[k],), ContactPoint(self.base[k]))

    def embedding(self, k):
        return FlatEmbedding(self.spec(k), self.scale[k])

    def offsets(self, v, scale=None):
        """``Psi_k(s_k v) - base_k`` with shape ``(m,) + v.shape + (3,)``."""
        s = self.scale if scale is None else scale
        v = np.asarray(v, dtype=np.complex128)
        shape = (-1,) + (1,) * v.ndim
        w = s.reshape(shape) * v[None, ...]
        x0 = self.base[:, 0].reshape(shape)
        a, b = self.a.reshape(shape), self.b.reshape(shape)
        dX = (x0 - b) * np.expm1(w / a)
        dY = w
        dZ = -a * dX - b * dY
        return np.stack([dX, dY, dZ], axis=-1)

    def __call__(self, v):
        v = np.asarray(v, dtype=np.complex128)
        return self.base.reshape((-1,) + (1,) * v.ndim + (3,)) + self.offsets(v)

    def circle_sup(self, scale=None, samples=256, refine=3):
        """Per-sample ``sup_{|v|=1} |Psi_k(s_k v) - base_k|`` (dense scan plus local zoom)."""
        with np.errstate(over="ignore", invalid="ignore"):
            return self._circle_sup(scale, samples, refine)

    def _circle_sup(self, scale, samples, refine):
        t = 2 * np.pi * np.arange(samples) / samples
        r = _finite(np.linalg.norm(self.offsets(np.exp(1j * t), scale), axis=-1))
        best = r.max(axis=1)
        tb = t[r.argmax(axis=1)]
        h = 2 * np.pi / samples
        s = self.scale if scale is None else scale
        for _ in range(refine):
            tc = tb[:, None] + h * np.linspace(-1, 1, 9)[None, :]
            r = _finite(self._offsets_rowwise(np.exp(1j * tc), s))
            k = r.argmax(axis=1)
            tb = tc[np.arange(tc.shape[0]), k]
            best = np.maximum(best, r.max(axis=1))
            h /= 4
        return best

    def _offsets_rowwise(self, v, s):
        x0 = self.base[:, 0:1]
        a, b = self.a[:, None], self.b[:, None]
        w = s[:, None] * v
        dX = (x0 - b) * np.expm1(w / a)
        return np.sqrt(np.abs(dX) ** 2 + np.abs(w) ** 2 + np.abs(a * dX + b * w) ** 2)


def boundary_disk_family(center_values, normals, mu, tol=1e-8, samples=256):
    """Flat disks ``Psi(u, .)`` through ``center_values[k]`` orthogonal to ``normals[k]``.

    Each disk is reparametrized by a radial factor found by bisection so that
    ``sup_{|v|<=1} |Psi(u, v) - F(u)| = mu`` (relative tolerance ``tol``).

    Parameters
    ----------
    center_values : (m, 3) complex array
        Boundary values ``F(u_k)`` of the center curve.
    normals : (m, 3) complex array
        Normal data ``G(u_k)``; first and last entries must not vanish.
    mu : float
        Target disk size.
    """
    base = np.atleast_2d(np.asarray(center_values, dtype=np.complex128))
    G = np.atleast_2d(np.asarray(normals, dtype=np.complex128))
    if base.shape[-1] != 3 or G.shape != base.shape:
        raise InputError("boundary disk families are built for n = 1 (3 coordinates)")
    if not mu > 0:
        raise InputError("mu must be positive")
    a, b = plane_from_normal(G)
    fam = FlatDiskFamily(base, G, a, b, np.ones(base.shape[0]), float(mu))
    # |Psi(s v) - base| >= |s v|, so s = mu brackets from above
    lo = np.zeros(base.shape[0])
    hi = np.full(base.shape[0], float(mu))
    for _ in range(64):
        r = fam.circle_sup(hi, samples)
        if np.all(r >= mu):
            break
        hi = np.where(r < mu, hi * 2, hi)
    else:
        raise InputError("could not bracket the disk radius")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        r = fam.circle_sup(mid, samples)
        lo = np.where(r < mu, mid, lo)
        hi = np.where(r < mu, hi, mid)
        if np.all(hi - lo <= tol * hi):
            break
    fam.scale = 0.5 * (lo + hi)
    return fam
