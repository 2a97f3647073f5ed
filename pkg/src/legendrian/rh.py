"""Approximate Riemann-Hilbert problem for Legendrian disks.

A :class:`BoundaryFamily` is a family of polynomial Legendrian disks
``v -> F(u, v)`` attached along the unit circle to a central Legendrian disk
``f``; every v-coefficient is a Laurent polynomial in ``u``. Substituting
``v = u**N`` and re-Legendrizing yields a Legendrian disk whose boundary
lies near the attached disks' boundaries.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contact import CurveJet, Disk, legendrian_residual, legendrize
from .errors import (
    CenterNotLegendrian,
    FamilyMismatch,
    InputError,
    NotConverged,
    PoleNotCleared,
)
from .series import LaurentPoly, ZERO, differentiate

CENTER_TOL = 1e-12
MAX_CIRCLE_SAMPLES = 1 << 16
CHUNK = 2048


def _as_poly(p):
    return p if isinstance(p, LaurentPoly) else LaurentPoly.constant(p)


def _max_abs(p):
    return float(np.abs(p.coeffs).max()) if p.nnz else 0.0


def center_defect(a, b, c0):
    """``c_0' + sum_i a^i_0 (b^i_0)'``; vanishes iff the center is Legendrian."""
    total = differentiate(c0)
    for ai, bi in zip(a, b):
        total = total + ai[0] * differentiate(bi[0])
    return total


def legendrian_closure(a, b, c0=None):
    """Solve for the z-coefficients making every ``F(u, .)`` Legendrian.

    Parameters
    ----------
    a, b : sequence of sequences of LaurentPoly
        ``a[i][j]`` and ``b[i][k]`` are the v-coefficients of ``X_i`` and ``Y_i``.
    c0 : LaurentPoly, optional
        Center z-component. When given, the center identity is checked and
        :class:`CenterNotLegendrian` raised if it fails; when omitted, ``c_0 = 0``
        is returned unchecked.

    Returns
    -------
    list of LaurentPoly
        ``[c_0, c_1, ..., c_M]`` with ``c_m = -(1/m) sum_i sum_{j+k=m} k a^i_j b^i_k``.
    """
    a = [[_as_poly(p) for p in ai] for ai in a]
    b = [[_as_poly(p) for p in bi] for bi in b]
    if len(a) != len(b) or not a:
        raise InputError("a and b must list the same number n >= 1 of pairs")
    if c0 is None:
        c0 = ZERO
    else:
        c0 = _as_poly(c0)
        d0 = center_defect(a, b, c0)
        scale = 1.0 + c0.l1_norm() + sum(ai[0].l1_norm() + bi[0].l1_norm() for ai, bi in zip(a, b))
        if _max_abs(d0) > CENTER_TOL * scale:
            raise CenterNotLegendrian(f"center defect {_max_abs(d0):.2e} is not zero")
    top = max(len(ai) - 1 + len(bi) - 1 for ai, bi in zip(a, b))
    c = [c0]
    for m in range(1, top + 1):
        acc = ZERO
        for ai, bi in zip(a, b):
            for k in range(1, min(m, len(bi) - 1) + 1):
                j = m - k
                if j < len(ai):
                    acc = acc + ai[j] * bi[k] * k
        c.append(acc * (-1.0 / m))
    return c


@dataclass(frozen=True)
class BoundaryFamily:
    """Polynomial-in-v family of Legendrian disks with Laurent coefficients in u.

    Attributes
    ----------
    a, b : tuple of tuples of LaurentPoly
        v-coefficients of the x and y components, one tuple per pair.
    c : tuple of LaurentPoly
        z-coefficients, derived by :func:`legendrian_closure`.
    arc : tuple of float, optional
        ``(theta0, theta1)`` when the family equals the center outside that
        arc of the unit circle; enables the C^1 check away from it.
    """

    a: tuple
    b: tuple
    c: tuple = field(init=False)
    c0: LaurentPoly = field(default=None, repr=False)
    arc: tuple | None = None

    def __post_init__(self):
        a = tuple(tuple(_as_poly(p) for p in ai) for ai in self.a)
        b = tuple(tuple(_as_poly(p) for p in bi) for bi in self.b)
        if any(len(ai) == 0 for ai in a) or any(len(bi) == 0 for bi in b):
            raise InputError("every pair needs at least the v^0 coefficient")
        c0 = ZERO if self.c0 is None else _as_poly(self.c0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c", tuple(legendrian_closure(a, b, c0)))
        object.__setattr__(self, "_defect_coeffs", self._compute_defect_coeffs())

    @classmethod
    def from_center(cls, f, a_higher, b_higher, arc=None):
        """Attach v-coefficients ``a_higher[i] = [a_1, a_2, ...]`` (likewise b) to ``f``."""
        if len(a_higher) != f.n or len(b_higher) != f.n:
            raise FamilyMismatch("need one coefficient list per pair of the center")
        a = [(x,) + tuple(ai) for x, ai in zip(f.xs, a_higher)]
        b = [(y,) + tuple(bi) for y, bi in zip(f.ys, b_higher)]
        return cls(a, b, c0=f.z, arc=arc)

    @classmethod
    def constant(cls, f):
        return cls.from_center(f, [[] for _ in range(f.n)], [[] for _ in range(f.n)])

    @property
    def n(self):
        return len(self.a)

    @property
    def coefficients(self):
        """v-coefficient lists in coordinate order ``(x_1, y_1, ..., z)``."""
        out = []
        for ai, bi in zip(self.a, self.b):
            out += [ai, bi]
        return tuple(out) + (self.c,)

    def center(self):
        return CurveJet.from_components([cl[0] for cl in self.coefficients], Disk())

    @property
    def pole_depth(self):
        """Largest pole order at 0 among all coefficients."""
        return max(p.pole_order() for cl in self.coefficients for p in cl)

    def _compute_defect_coeffs(self):
        out = []
        for m in range(1, len(self.c)):
            d = differentiate(self.c[m])
            for ai, bi in zip(self.a, self.b):
                for j in range(0, min(m, len(ai) - 1) + 1):
                    k = m - j
                    if k < len(bi):
                        d = d + ai[j] * differentiate(bi[k])
            out.append(d)
        return tuple(out)

    @property
    def defect_coefficients(self):
        """``d_m = c_m' + sum_i sum_{j+k=m} a^i_j (b^i_k)'`` for ``m >= 1``."""
        return self._defect_coeffs

    @property
    def defect_depth(self):
        return max((d.pole_order() for d in self._defect_coeffs), default=0)

    # -- evaluation -------------------------------------------------------
    def coefficient_values(self, u):
        """Per component, an array ``(len(coeffs),) + u.shape`` of coefficient values."""
        u = np.asarray(u, dtype=np.complex128)
        return [np.stack([p(u) for p in cl]) for cl in self.coefficients]

    @staticmethod
    def _horner(vals, v, deriv=False):
        if deriv:
            if len(vals) <= 1:
                return np.zeros(np.broadcast_shapes(vals.shape[1:], np.shape(v)), np.complex128)
            vals = vals[1:] * np.arange(1, len(vals)).reshape((-1,) + (1,) * (vals.ndim - 1))
        acc = np.zeros(1, np.complex128)
        for row in vals[::-1]:
            acc = acc * v + row
        return acc

    def evaluate(self, u, v):
        """``F(u, v)`` with shape ``broadcast(u, v).shape + (2n+1,)``."""
        u, v = np.broadcast_arrays(np.asarray(u, np.complex128), np.asarray(v, np.complex128))
        vals = self.coefficient_values(u)
        return np.stack([self._horner(cv, v) for cv in vals], axis=-1)

    def closure_residual(self, u, v):
        """``|Z_v + sum_i X_i (Y_i)_v|`` at broadcast sample points."""
        u, v = np.broadcast_arrays(np.asarray(u, np.complex128), np.asarray(v, np.complex128))
        vals = self.coefficient_values(u)
        total = self._horner(vals[-1], v, deriv=True)
        for i in range(self.n):
            total = total + self._horner(vals[2 * i], v) * self._horner(vals[2 * i + 1], v, deriv=True)
        return np.abs(total)


def diagonal_substitute(fam, N):
    """The disk ``F_N(u) = F(u, u**N)``; needs ``N > pole_depth``."""
    N = int(N)
    if N <= fam.pole_depth:
        raise PoleNotCleared(f"N={N} does not exceed the pole depth {fam.pole_depth}")
    comps = []
    for cl in fam.coefficients:
        if not cl[0].is_taylor():
            raise PoleNotCleared("the v^0 coefficients (the center) must have no poles")
        degs = np.concatenate([p.degrees + j * N for j, p in enumerate(cl)])
        coefs = np.concatenate([p.coeffs for p in cl])
        comps.append(LaurentPoly.from_arrays(degs, coefs))
    return CurveJet.from_components(comps, Disk())


def defect(fam, N):
    """Defect ``sum_{m>=1} d_m(u) u**(m N)`` of ``F_N`` and a bound for its primitive.

    Returns ``(poly, bound)`` with ``bound = sum_k |coeff_k| / (k+1)``, which
    dominates ``sup_{|zeta|<=1} |int_0^zeta poly|``.
    """
    N = int(N)
    if N <= max(fam.pole_depth, fam.defect_depth):
        raise PoleNotCleared(
            f"N={N} must exceed max(pole depth, defect depth) = "
            f"{max(fam.pole_depth, fam.defect_depth)}")
    parts = [d for d in fam.defect_coefficients if not d.is_zero()]
    if not parts:
        return ZERO, 0.0
    degs = np.concatenate([d.degrees + (m + 1) * N for m, d in enumerate(fam.defect_coefficients)])
    coefs = np.concatenate([d.coeffs for d in fam.defect_coefficients])
    poly = LaurentPoly.from_arrays(degs, coefs)
    bound = float(np.sum(np.abs(poly.coeffs) / (poly.degrees + 1.0)))
    return poly, bound


# -- sampled distances ---------------------------------------------------------

def _circle_count(degree, samples):
    return int(min(MAX_CIRCLE_SAMPLES, max(samples, 4 * (degree + 1))))


def _curve_degree(f):
    return max((c.max_deg or 0) - min(c.min_deg or 0, 0) for c in f.components)


def _unit_points(m, radius=1.0):
    return radius * np.exp(2j * np.pi * np.arange(m) / m)


def _family_gap(vals, v, tg):
    """``|F(u_k, v_ks) - tg_k|`` without materializing the stacked values."""
    acc = 0.0
    for c, cv in enumerate(vals):
        d = BoundaryFamily._horner(cv[:, :, None], v) - tg[:, :, c]
        acc = acc + d.real * d.real + d.imag * d.imag
    return np.sqrt(acc)


def _nearest_on_circle(fam, u, targets, samples, refine=4):
    """Upper bound for ``dist(targets[k], F(u[k], T))``."""
    out = np.empty(u.size)
    for s0 in range(0, u.size, CHUNK):
        sl = slice(s0, s0 + CHUNK)
        vals = fam.coefficient_values(u[sl])
        tg = targets[sl][:, None, :]
        t = 2 * np.pi * np.arange(samples) / samples
        d = _family_gap(vals, np.exp(1j * t)[None, :], tg)
        best = d.min(axis=1)
        tb = t[d.argmin(axis=1)]
        h = 2 * np.pi / samples
        for _ in range(refine):
            tc = tb[:, None] + h * np.linspace(-1, 1, 9)[None, :]
            d = _family_gap(vals, np.exp(1j * tc), tg)
            k = d.argmin(axis=1)
            tb = tc[np.arange(tc.shape[0]), k]
            best = np.minimum(best, d.min(axis=1))
            h /= 4
        out[sl] = best
    return out


def _disk_grid(samples):
    nr = max(2, int(round(np.sqrt(samples / 4))))
    nt = max(8, samples // nr)
    r = np.arange(1, nr + 1) / nr
    th = 2 * np.pi * np.arange(nt) / nt
    pts = (r[:, None] * np.exp(1j * th[None, :])).ravel()
    return np.concatenate([[0j], pts]), 1.0 / nr


def _nearest_on_disk(fam, u, targets, samples, refine=4):
    """Upper bound for ``dist(targets[k], F(u[k], closed unit disk))``."""
    grid, h0 = _disk_grid(samples)
    off = np.linspace(-1, 1, 9)
    offsets = (off[:, None] + 1j * off[None, :]).ravel()
    out = np.empty(u.size)
    for s0 in range(0, u.size, CHUNK):
        sl = slice(s0, s0 + CHUNK)
        vals = fam.coefficient_values(u[sl])
        tg = targets[sl][:, None, :]
        d = _family_gap(vals, grid[None, :], tg)
        best = d.min(axis=1)
        vb = grid[d.argmin(axis=1)]
        h = h0
        for _ in range(refine):
            vc = vb[:, None] + h * offsets[None, :]
            mod = np.abs(vc)
            vc = np.where(mod > 1, vc / np.maximum(mod, 1e-300), vc)
            d = _family_gap(vals, vc, tg)
            k = d.argmin(axis=1)
            vb = vc[np.arange(vc.shape[0]), k]
            best = np.minimum(best, d.min(axis=1))
            h /= 4
        out[sl] = best
    return out


def sup_difference(g, f, radius, samples=256):
    """``max |g - f|`` on the circle of the given radius (= sup over the closed disk)."""
    diff = CurveJet.from_components(
        [p - q for p, q in zip(g.components, f.components)], Disk())
    m = _circle_count(_curve_degree(diff), samples)
    return float(np.linalg.norm(diff(_unit_points(m, radius)), axis=-1).max())


def _sampled_max(nearest, g, fam, rho, samples, stop_above):
    m = _circle_count(_curve_degree(g), samples)
    u = _unit_points(m)
    if stop_above is not None and m > 4 * CHUNK:
        # a max over a subset bounds the full max from below: cheap early reject
        sub = u[:: m // CHUNK]
        coarse = float(nearest(fam, sub, g(rho * sub), samples).max())
        if coarse >= stop_above:
            return coarse
    return float(nearest(fam, u, g(rho * u), samples).max())


def boundary_distance(g, fam, samples=256, stop_above=None):
    """``max_u dist(G(u), F(u, T))`` over sampled ``u`` in the unit circle.

    With ``stop_above`` set, a coarse pass may return early with a value that
    already reaches it.
    """
    return _sampled_max(_nearest_on_circle, g, fam, 1.0, samples, stop_above)


def interior_distance(g, fam, rho, samples=256, stop_above=None):
    """``max_u dist(G(rho u), F(u, closed disk))`` over sampled ``u``."""
    return _sampled_max(_nearest_on_disk, g, fam, rho, samples, stop_above)


def c1_distance_off_arc(g, f, arc, margin, samples=256):
    """C^1 distance of ``g`` and ``f`` on the closed disk minus a neighbourhood of an arc.

    The neighbourhood is the set of points within ``margin`` (in angle and in
    radius) of the arc ``(theta0, theta1)`` on the unit circle.
    """
    theta0, theta1 = arc
    m = _circle_count(max(_curve_degree(g), _curve_degree(f)), samples)
    th = 2 * np.pi * np.arange(m) / m
    rel = np.mod(th - (theta0 - margin), 2 * np.pi)
    outside = rel > (theta1 - theta0) + 2 * margin
    radii = np.linspace(0, 1, 33)
    pts = (radii[:, None] * np.exp(1j * th[None, :]))
    mask = (radii[:, None] <= 1 - margin) | outside[None, :]
    pts = pts[mask]
    d0 = np.linalg.norm(g(pts) - f(pts), axis=-1)
    d1 = np.linalg.norm(g.derivative(pts) - f.derivative(pts), axis=-1)
    return float(max(d0.max(), d1.max()))


@dataclass
class RHReport:
    N: int
    rho_prime: float
    defect_bound: float
    sup_center: float
    dist_boundary: float
    dist_interior: dict
    c1_off_arc: float | None = None
    history: list = field(default_factory=list)

    def as_dict(self):
        return {
            "N": self.N,
            "rho_prime": self.rho_prime,
            "defect_bound": self.defect_bound,
            "sup_center": self.sup_center,
            "dist_boundary": self.dist_boundary,
            "dist_interior": {f"{k:.6f}": v for k, v in self.dist_interior.items()},
            "c1_off_arc": self.c1_off_arc,
            "history": self.history,
        }


def _check_center(f, fam):
    if not isinstance(f.domain, Disk):
        raise InputError("the center must be a disk curve")
    scale = 1.0 + f.l1_norm()
    if legendrian_residual(f) > CENTER_TOL * scale:
        raise CenterNotLegendrian("the center curve is not Legendrian")
    if fam.n != f.n:
        raise FamilyMismatch(f"family has n={fam.n}, center has n={f.n}")
    for cl, comp in zip(fam.coefficients, f.components):
        if not cl[0].allclose(comp, atol=CENTER_TOL * scale):
            raise FamilyMismatch("family v^0 coefficients differ from the center")


def _rho_candidates(rho0, finest=1e-4):
    out, k = [], 0
    while True:
        r = 1 - (1 - rho0) * 2.0 ** (-k)
        if 1 - r < finest:
            break
        out.append(r)
        k += 1
    return out[::-1]


def rh_approximate(f, fam, eps, rho0, N_max=4096, samples=256, arc_margin=0.1):
    """Legendrian disk ``G`` with boundary near the attached family.

    ``N`` doubles from ``max(N0, N1) + 1`` until the defect bound is below
    ``eps/4`` and sampled checks of (i) ``sup_{|u|<=rho'} |G - f| < eps``,
    (ii) ``dist(G(u), F(u, T)) < eps`` and (iii) ``dist(G(rho u), F(u, closed disk))
    < eps`` for ``rho`` in ``{rho', (1+rho')/2, 1 - 1e-3}`` pass. ``rho'`` is the
    largest of ``1 - (1 - rho0) 2**-k`` passing (i). With ``fam.arc`` set, the
    C^1 distance away from the arc is also required below ``eps``.

    Returns
    -------
    G : CurveJet
    rho_prime : float
    N : int
    report : RHReport
    """
    if not 0 < rho0 < 1:
        raise InputError("rho0 must lie in (0, 1)")
    if not eps > 0:
        raise InputError("eps must be positive")
    _check_center(f, fam)
    N = max(fam.pole_depth, fam.defect_depth) + 1
    history = []
    candidates = _rho_candidates(rho0)
    while N <= N_max:
        _, bound = defect(fam, N)
        entry = {"N": N, "defect_bound": bound}
        history.append(entry)
        if bound >= eps / 4:
            N *= 2
            continue
        G = legendrize(diagonal_substitute(fam, N))
        rho_p, sup_i = None, None
        for r in candidates:
            s = sup_difference(G, f, r, samples)
            if s < eps:
                rho_p, sup_i = r, s
                break
        entry["rho_prime"] = rho_p
        if rho_p is None:
            N *= 2
            continue
        entry["sup_center"] = sup_i
        d_ii = boundary_distance(G, fam, samples, stop_above=eps)
        entry["dist_boundary"] = d_ii
        if d_ii >= eps:
            N *= 2
            continue
        d_iii = {}
        for r in sorted({rho_p, (1 + rho_p) / 2, max(rho_p, 1 - 1e-3)}):
            d_iii[r] = interior_distance(G, fam, r, samples, stop_above=eps)
            if d_iii[r] >= eps:
                break
        entry["dist_interior"] = max(d_iii.values())
        c1 = None
        if fam.arc is not None and entry["dist_interior"] < eps:
            c1 = c1_distance_off_arc(G, f, fam.arc, arc_margin, samples)
            entry["c1_off_arc"] = c1
        if max(d_iii.values()) < eps and (c1 is None or c1 < eps):
            report = RHReport(N, rho_p, bound, sup_i, d_ii, d_iii, c1, history)
            return G, rho_p, N, report
        N *= 2
    raise NotConverged(f"no N <= {N_max} met the tolerance {eps:g}")
