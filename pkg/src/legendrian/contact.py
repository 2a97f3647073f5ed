"""The standard contact form ``dz + sum_j x_j dy_j`` on C^{2n+1}.

Coordinates are always ordered ``(x_1, y_1, ..., x_n, y_n, z)``. Curves are
:class:`CurveJet` objects whose components are Laurent polynomials over a
disk or an annulus centred at 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, InputError, NonzeroResidue
from .series import LaurentPoly, antiderivative, differentiate, residue, residue_tolerance


@dataclass(frozen=True)
class Disk:
    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError("disk radius must be positive")

    @property
    def boundary_radii(self):
        return (self.radius,)

    @property
    def anchor(self):
        return 0.0

    @property
    def diameter(self):
        return 2.0 * self.radius

    def contains_radius(self, rho, slack=1e-12):
        return rho <= self.radius * (1 + slack)


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise InputError("annulus needs 0 < inner < outer")

    @property
    def boundary_radii(self):
        return (self.inner, self.outer)

    @property
    def anchor(self):
        return float(self.inner)

    @property
    def diameter(self):
        return 2.0 * self.outer

    def contains_radius(self, rho, slack=1e-12):
        return self.inner * (1 - slack) <= rho <= self.outer * (1 + slack)


@dataclass(frozen=True)
class ContactPoint:
    coords: tuple

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=np.complex128).ravel()
        if c.size % 2 != 1 or c.size < 3:
            raise InputError("a contact point has 2n+1 >= 3 coordinates")
        if not np.all(np.isfinite(c)):
            raise InputError("contact point coordinates must be finite")
        object.__setattr__(self, "coords", tuple(complex(v) for v in c))

    @property
    def n(self):
        return (len(self.coords) - 1) // 2

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype or np.complex128)


@dataclass(frozen=True)
class CurveJet:
    """Holomorphic map from a disk or annulus into C^{2n+1}.

    ``xs`` and ``ys`` hold the n pairs, ``z`` the last coordinate.
    """

    xs: tuple
    ys: tuple
    z: LaurentPoly
    domain: Disk | Annulus = field(default_factory=Disk)

    def __post_init__(self):
        xs, ys = tuple(self.xs), tuple(self.ys)
        if len(xs) != len(ys) or not xs:
            raise InputError("need n >= 1 matching x and y components")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)
        if isinstance(self.domain, Disk):
            for c in self.components:
                if not c.is_taylor():
                    raise InputError("disk curves cannot have negative degrees")

    @classmethod
    def from_components(cls, comps, domain=None):
        comps = [c if isinstance(c, LaurentPoly) else LaurentPoly.constant(c) for c in comps]
        if len(comps) % 2 != 1 or len(comps) < 3:
            raise InputError("need 2n+1 components")
        return cls(tuple(comps[0:-1:2]), tuple(comps[1:-1:2]), comps[-1],
                   Disk() if domain is None else domain)

    @property
    def n(self):
        return len(self.xs)

    @property
    def dim(self):
        return 2 * self.n + 1

    @property
    def components(self):
        out = []
        for x, y in zip(self.xs, self.ys):
            out += [x, y]
        return tuple(out) + (self.z,)

    def replace(self, index=None, poly=None, *, z=None, domain=None):
        comps = list(self.components)
        if index is not None:
            comps[index] = poly
        if z is not None:
            comps[-1] = z
        return CurveJet.from_components(comps, self.domain if domain is None else domain)

    def with_z(self, z):
        return self.replace(z=z)

    def __call__(self, zeta):
        """Values with shape ``zeta.shape + (2n+1,)``."""
        return np.stack([c(zeta) for c in self.components], axis=-1)

    def derivative(self, zeta):
        return np.stack([differentiate(c)(zeta) for c in self.components], axis=-1)

    def l1_norm(self):
        return sum(c.l1_norm() for c in self.components)

    def scaled(self, factor):
        return CurveJet.from_components([c * factor for c in self.components], self.domain)

    def allclose(self, other, atol=1e-13):
        return self.n == other.n and all(
            a.allclose(b, atol=atol) for a, b in zip(self.components, other.components))

    def boundary_points(self, m):
        """``m`` equispaced points on each boundary circle."""
        theta = 2 * np.pi * np.arange(m) / m
        return np.concatenate([r * np.exp(1j * theta) for r in self.domain.boundary_radii])


def lagrange_form(f):
    """Density of ``sum_i x_i dy_i`` against ``d zeta``."""
    total = LaurentPoly()
    for x, y in zip(f.xs, f.ys):
        total = total + x * differentiate(y)
    return total


def pullback_eta(f):
    """Density of ``f^* eta`` against ``d zeta``: ``Z' + sum_i X_i Y_i'``."""
    return differentiate(f.z) + lagrange_form(f)


def pullback_eta_j(f, j):
    """Density of ``f^* eta_j`` where ``eta_j = dz + y_j dx_j + sum_{i != j} x_i dy_i``."""
    _check_index(f.n, j)
    total = differentiate(f.z)
    for i, (x, y) in enumerate(zip(f.xs, f.ys), start=1):
        total = total + (y * differentiate(x) if i == j else x * differentiate(y))
    return total


def legendrize(f):
    """Replace ``z`` by ``z - int f^* eta`` so that the curve becomes Legendrian.

    The primitive is anchored at 0 on disks (``z(0)`` unchanged) and at the
    inner radius on annuli. Annuli with a nonzero residue in ``f^* eta``
    raise :class:`NonzeroResidue`; kill the periods first.
    """
    defect = pullback_eta(f)
    if defect.is_zero():
        return f
    prim = antiderivative(defect)
    anchor = f.domain.anchor
    if anchor != 0:
        prim = prim - prim(anchor)
    return f.with_z(f.z - prim)


def legendrian_residual(f, m=64):
    """Max of ``|f^* eta / d zeta|`` over ``m`` equispaced points per boundary circle."""
    if m < 8:
        raise InputError("need at least 8 samples per circle")
    return float(np.max(np.abs(pullback_eta(f)(f.boundary_points(m)))))


def is_period_free(f):
    """Whether ``f^* eta`` has negligible residue (always true on disks)."""
    d = pullback_eta(f)
    return abs(residue(d)) <= residue_tolerance(d)


def _check_index(n, j):
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"pair index {j} outside 1..{n}")


def involution(f, j):
    """Apply ``Phi_j``: ``y_j -> -y_j`` and ``z -> z + x_j y_j``.

    Works on a :class:`CurveJet`, a :class:`ContactPoint` or an array whose
    last axis holds coordinates.
    """
    if isinstance(f, CurveJet):
        _check_index(f.n, j)
        comps = list(f.components)
        x, y = comps[2 * j - 2], comps[2 * j - 1]
        comps[2 * j - 1] = -y
        comps[-1] = f.z + x * y
        return CurveJet.from_components(comps, f.domain)
    point = isinstance(f, ContactPoint)
    p = np.array(f, dtype=np.complex128)
    _check_index((p.shape[-1] - 1) // 2, j)
    x, y = p[..., 2 * j - 2].copy(), p[..., 2 * j - 1].copy()
    p[..., 2 * j - 1] = -y
    p[..., -1] = p[..., -1] + x * y
    return ContactPoint(p) if point else p


def eta_covector(p):
    """Components of ``eta`` at points ``p`` (last axis = coordinates)."""
    p = np.asarray(p, dtype=np.complex128)
    out = np.zeros_like(p)
    out[..., 1:-1:2] = p[..., 0:-1:2]
    out[..., -1] = 1.0
    return out


def eta(p, v):
    """``<eta_p, v>``."""
    return np.sum(eta_covector(p) * np.asarray(v), axis=-1)


def d_eta(u, v):
    """``d eta (u, v) = sum_j (u_xj v_yj - u_yj v_xj)``."""
    u, v = np.asarray(u), np.asarray(v)
    return np.sum(u[..., 0:-1:2] * v[..., 1:-1:2] - u[..., 1:-1:2] * v[..., 0:-1:2], axis=-1)


def reeb_standard(n):
    """The Reeb field ``d/dz`` as a constant vector."""
    v = np.zeros(2 * n + 1, np.complex128)
    v[-1] = 1.0
    return v


def kernel_basis(p):
    """The spanning fields ``d/dx_j`` and ``d/dy_j - x_j d/dz`` of ``ker eta`` at ``p``."""
    p = np.asarray(p, dtype=np.complex128)
    n = (p.size - 1) // 2
    basis = []
    for j in range(n):
        e = np.zeros(2 * n + 1, np.complex128)
        e[2 * j] = 1.0
        basis.append(e)
        e = np.zeros(2 * n + 1, np.complex128)
        e[2 * j + 1] = 1.0
        e[-1] = -p[2 * j]
        basis.append(e)
    return np.array(basis)
