"""Periods of ``sum_i x_i dy_i`` over cycles, period-dominating sprays and
single-valued integration of the z-component.

Domains are disks (no cycles) and annuli (one generator). Circle cycles are
integrated exactly through residues; closed sampled contours (``Polyline``)
use the periodic trapezoid rule with a spectral (FFT) tangent.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contact import CurveJet, lagrange_form
from .errors import (
    ConstantPairedComponent,
    CycleOutsideDomain,
    DominationFailed,
    InputError,
    NonvanishingPeriod,
    SingularMatrix,
)
from .series import LaurentPoly, antiderivative, differentiate, residue

COND_MAX = 1e8
PERIOD_TOL = 1e-10


@dataclass(frozen=True)
class Circle:
    radius: float
    orientation: int = 1

    def __post_init__(self):
        if not self.radius > 0:
            raise InputError("circle radius must be positive")
        if self.orientation not in (1, -1):
            raise InputError("orientation is +1 or -1")

    def reversed(self):
        return Circle(self.radius, -self.orientation)

    def sample(self, m=4096):
        """Closed :class:`Polyline` tracing this circle."""
        theta = 2 * np.pi * np.arange(m + 1) / m * self.orientation
        pts = self.radius * np.exp(1j * theta)
        pts[-1] = pts[0]
        return Polyline(pts)


@dataclass(frozen=True)
class Polyline:
    """Closed contour given by samples equispaced in some periodic parameter."""

    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.complex128).ravel()
        if pts.size < 17:
            raise InputError("a polyline cycle needs at least 16 distinct samples")
        if pts[0] != pts[-1]:
            raise InputError("polyline cycle must be closed (first point == last point)")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)


def _check_cycle(f, cycle):
    dom = f.domain
    if isinstance(cycle, Circle):
        radii = np.array([cycle.radius])
    else:
        radii = np.abs(cycle.points)
    if np.any(radii == 0) or not all(dom.contains_radius(r) for r in (radii.min(), radii.max())):
        raise CycleOutsideDomain(f"cycle leaves the domain {dom}")


def contour_integral(p, cycle):
    """``oint_C p(u) du`` for a Laurent polynomial ``p``."""
    if isinstance(cycle, Circle):
        return 2j * np.pi * residue(p) * cycle.orientation
    pts = cycle.points[:-1]
    m = pts.size
    # spectral derivative of the periodic parametrization, d/dt with t in [0, 2 pi)
    k = np.fft.fftfreq(m, d=1.0 / m)
    if m % 2 == 0:
        k[m // 2] = 0.0
    tangent = np.fft.ifft(1j * k * np.fft.fft(pts))
    return complex(np.sum(p(pts) * tangent) * (2 * np.pi / m))


def period(f, cycle):
    """``oint_C sum_i X_i dY_i``."""
    _check_cycle(f, cycle)
    return contour_integral(lagrange_form(f), cycle)


def periods(f, cycles):
    return np.array([period(f, c) for c in cycles], dtype=np.complex128)


def domain_cycles(f):
    """A homology basis of the domain: none for disks, one circle for annuli."""
    radii = f.domain.boundary_radii
    if len(radii) == 1:
        return []
    return [Circle(float(np.sqrt(radii[0] * radii[1])))]


def _paired_index(f, target):
    if not 0 <= target < 2 * f.n:
        raise InputError(f"target component {target} must be an x or y slot (0..{2 * f.n - 1})")
    return target + 1 if target % 2 == 0 else target - 1


def _direction_periods(f, target, g, cycles):
    """Linear part of the period map when ``g`` is added to component ``target``."""
    comps = f.components
    if target % 2 == 0:
        form = g * differentiate(comps[target + 1])
    else:
        form = comps[target - 1] * differentiate(g)
    return np.array([contour_integral(form, c) for c in cycles], dtype=np.complex128)


@dataclass(frozen=True)
class Spray:
    """Affine family ``core + sum_k zeta_k g_k`` in one x or y slot."""

    core: CurveJet
    directions: tuple
    target_component: int
    period_matrix: np.ndarray
    cycles: tuple

    @property
    def rank(self):
        return len(self.directions)

    def curve_at(self, zeta):
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.complex128))
        if zeta.size != self.rank:
            raise InputError(f"spray parameter has {self.rank} entries")
        comp = self.core.components[self.target_component]
        for z, g in zip(zeta, self.directions):
            comp = comp + g * complex(z)
        return self.core.replace(self.target_component, comp)

    def periods(self, zeta=None):
        f = self.core if zeta is None else self.curve_at(zeta)
        return periods(f, self.cycles)


def _monomial_order(max_power):
    yield 0
    for m in range(1, max_power + 1):
        yield -m
        yield m


def build_dominating_spray(f, cycles, target_component=0, max_power=8):
    """Pick Laurent monomials ``u**m`` (``|m| <= max_power``) whose period matrix
    is invertible with condition number below 1e8, then rescale them so the
    period derivative is (numerically) the identity.
    """
    cycles = tuple(cycles)
    for c in cycles:
        _check_cycle(f, c)
    paired = _paired_index(f, target_component)
    ell = len(cycles)
    if ell == 0:
        return Spray(f, (), target_component, np.zeros((0, 0), np.complex128), ())
    if differentiate(f.components[paired]).is_zero():
        raise ConstantPairedComponent("the paired component is constant")
    chosen, columns = [], []
    for m in _monomial_order(max_power):
        g = LaurentPoly.monomial(m)
        col = _direction_periods(f, target_component, g, cycles)
        trial = np.column_stack(columns + [col])
        sv = np.linalg.svd(trial, compute_uv=False)
        if sv[-1] > 0 and sv[0] / sv[-1] < COND_MAX:
            chosen.append(g)
            columns.append(col)
            if len(chosen) == ell:
                break
    if len(chosen) < ell:
        raise DominationFailed(
            f"no {ell} Laurent monomials with |m| <= {max_power} dominate the periods")
    M = np.column_stack(columns)
    Minv = np.linalg.inv(M)
    directions = tuple(
        sum((chosen[l] * complex(Minv[l, k]) for l in range(ell)), LaurentPoly())
        for k in range(ell))
    P = np.column_stack([_direction_periods(f, target_component, g, cycles) for g in directions])
    return Spray(f, directions, target_component, P, cycles)


def solve_period_vanishing(spray, cycles=None):
    """One exact linear solve ``zeta' = -M^{-1} P(0)`` (the period map is affine).

    Returns ``(zeta', deformed curve)``; the z-component of the deformed curve
    is left as is (see :func:`integrate_z`).
    """
    if cycles is not None and tuple(cycles) != spray.cycles:
        spray = build_dominating_spray(spray.core, cycles, spray.target_component)
    if spray.rank == 0:
        return np.zeros(0, np.complex128), spray.core
    M = spray.period_matrix
    if not np.all(np.isfinite(M)) or np.linalg.cond(M) >= COND_MAX:
        raise SingularMatrix("period matrix is singular or ill conditioned")
    P0 = spray.periods()
    if np.all(P0 == 0):
        return np.zeros(spray.rank, np.complex128), spray.core
    zeta = -np.linalg.solve(M, P0)
    return zeta, spray.curve_at(zeta)


def integrate_z(f, z0=0.0, tol=None):
    """Replace ``z`` by the primitive of ``-sum X_i dY_i`` with ``z(anchor) = z0``.

    The anchor is 0 on disks and the inner radius on annuli. Raises
    :class:`NonvanishingPeriod` if a domain cycle has a nonzero period.
    """
    form = lagrange_form(f)
    scale = 1.0 + form.l1_norm()
    tol = PERIOD_TOL * scale if tol is None else tol
    for c in domain_cycles(f):
        p = contour_integral(form, c)
        if abs(p) > tol:
            raise NonvanishingPeriod(f"period {p:.3e} over {c}")
    prim = -antiderivative(form, tol=tol / (2 * np.pi))
    anchor = f.domain.anchor
    prim = prim + (complex(z0) - (prim(anchor) if anchor != 0 else 0.0))
    return f.with_z(prim)
