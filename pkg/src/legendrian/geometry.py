"""Induced metric diagnostics, embedding checks and a single boundary-push step."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .contact import CurveJet, Disk, legendrian_residual
from .errors import InputError, NormalDegenerate, NotConverged, PushIneffective, TargetTooFar
from .flat import boundary_disk_family, jitter_normals, plane_from_normal
from .rh import BoundaryFamily, rh_approximate
from .series import LaurentPoly, fit_on_circle

TAU_EMBED = 1e-9


def induced_speed(f, zeta):
    """Euclidean norm of the derivative vector ``f'(zeta)``."""
    d = f.derivative(zeta)
    return np.linalg.norm(d, axis=-1)


# -- intrinsic distance ---------------------------------------------------------

@dataclass(frozen=True)
class MetricGrid:
    """Polar graph on a disk: a center node plus ``n_r`` rings of ``n_theta`` nodes.

    Edges join the center to the first ring and each ring node to its angular
    neighbour, its radial neighbour and the two diagonal neighbours outward.
    """

    n_r: int = 64
    n_theta: int = 256
    radius: float = 1.0

    def __post_init__(self):
        if self.n_r < 16 or self.n_theta < 64:
            raise InputError("metric grids need n_r >= 16 and n_theta >= 64")

    @property
    def size(self):
        return 1 + self.n_r * self.n_theta

    def nodes(self):
        r = self.radius * np.arange(1, self.n_r + 1) / self.n_r
        th = 2 * np.pi * np.arange(self.n_theta) / self.n_theta
        ring = (r[:, None] * np.exp(1j * th[None, :])).ravel()
        return np.concatenate([[0j], ring])

    def ring_index(self, k):
        """Node indices of ring ``k`` (1-based; ring ``n_r`` is the boundary)."""
        return 1 + (k - 1) * self.n_theta + np.arange(self.n_theta)

    def edges(self):
        nt = self.n_theta
        idx = lambda k, i: 1 + (k - 1) * nt + (i % nt)  # noqa: E731
        i = np.arange(nt)
        src, dst = [np.zeros(nt, np.int64)], [idx(1, i)]
        for k in range(1, self.n_r + 1):
            src.append(idx(k, i))
            dst.append(idx(k, i + 1))
            if k < self.n_r:
                for shift in (-1, 0, 1):
                    src.append(idx(k, i))
                    dst.append(idx(k + 1, i + shift))
        return np.concatenate(src), np.concatenate(dst)

    def csr(self, values):
        """Symmetric CSR arrays with chordal weights ``|F(p) - F(q)|``."""
        s, t = self.edges()
        w = np.linalg.norm(values[s] - values[t], axis=-1)
        if not np.all(np.isfinite(w)):
            raise InputError("curve values on the grid must be finite")
        s, t, w = np.concatenate([s, t]), np.concatenate([t, s]), np.concatenate([w, w])
        order = np.lexsort((t, s))
        s, t, w = s[order], t[order], w[order]
        indptr = np.zeros(self.size + 1, np.int64)
        np.add.at(indptr, s + 1, 1)
        return np.cumsum(indptr), t.astype(np.int64), w.astype(np.float64)


def intrinsic_distance(f, n_r=64, n_theta=256, grid=None):
    """Graph estimate of ``dist_f(0, boundary)`` on a polar grid with chordal weights."""
    if not isinstance(getattr(f, "domain", Disk()), Disk):
        raise InputError("intrinsic distance is defined for disk curves")
    radius = f.domain.radius if hasattr(f, "domain") else 1.0
    grid = grid or MetricGrid(n_r, n_theta, radius)
    values = np.asarray(f(grid.nodes()))
    indptr, indices, weights = grid.csr(values)
    dist = _backend.get().dijkstra_csr(indptr, indices, weights, 0)
    return float(dist[grid.ring_index(grid.n_r)].min())


def radial_path_length(f, theta=0.0, n_r=64, radius=1.0):
    """Chordal length of the sampled radial path at angle ``theta``."""
    r = radius * np.arange(n_r + 1) / n_r
    pts = f(r * np.exp(1j * theta))
    return float(np.linalg.norm(np.diff(pts, axis=0), axis=-1).sum())


# -- embedding check ------------------------------------------------------------

@dataclass
class EmbeddingReport:
    min_gap: float
    min_speed: float
    sep_at_min: float
    min_admissible_sep: float
    delta_diag: float
    samples: int

    @property
    def injective(self):
        return self.min_gap >= TAU_EMBED

    @property
    def immersed(self):
        return self.min_speed >= TAU_EMBED

    @property
    def flagged(self):
        return not (self.injective and self.immersed)


def embedding_samples(M, domain=None):
    """Polar sample set closed under ``zeta -> -zeta`` (even angle count)."""
    domain = domain or Disk()
    K = max(3, int(round(math.sqrt(M / 8))))
    radii = domain.boundary_radii
    if len(radii) == 1:
        r = radii[0] * np.arange(1, K + 1) / K
        center = [0j]
    else:
        r = np.linspace(radii[0], radii[1], K)
        center = []
    th = 2 * np.pi * np.arange(8 * K) / (8 * K)
    return np.concatenate([center, (r[:, None] * np.exp(1j * th[None, :])).ravel()])


def embedding_check(f, M=1024, delta_diag=None, domain=None):
    """Injectivity margin over well-separated sample pairs and the minimum speed.

    Parameters
    ----------
    f : callable
        Curve with ``f(zeta)`` and ``f.derivative(zeta)``.
    M : int
        Approximate number of samples (at least 100).
    delta_diag : float, optional
        Pairs closer than this in the parameter are skipped; defaults to
        ``0.05 * diameter`` of the domain.
    """
    if M < 100:
        raise InputError("embedding_check needs M >= 100")
    domain = domain or getattr(f, "domain", Disk())
    delta_diag = 0.05 * domain.diameter if delta_diag is None else float(delta_diag)
    zeta = embedding_samples(M, domain)
    vals = np.ascontiguousarray(np.asarray(f(zeta), dtype=np.complex128))
    gap, sep, adm = _backend.get().min_pair_gap(np.ascontiguousarray(zeta), vals, delta_diag)
    speed = float(induced_speed(f, zeta).min())
    return EmbeddingReport(float(gap), speed, float(sep), float(adm), delta_diag, zeta.size)


# -- boundary push ----------------------------------------------------------------

@dataclass
class PushParams:
    """Knobs of a single boundary-push step.

    Attributes
    ----------
    mu : float
        Size of the attached flat disks (0 disables the push).
    delta : float
        Required bound on ``|f - target|`` over the boundary.
    d : float
        Current lower bound for the intrinsic boundary distance (reporting only).
    m : int
        Initial number of boundary arcs (even, at least 4); doubled until
        the per-arc oscillation of ``f`` and the target is below ``eps``.
    eps : float
        Per-arc oscillation tolerance.
    eps_fit : float
        Accuracy of the Laurent fit of the disk family (relative to ``mu``).
    eps_rh : float
        Tolerance handed to the Riemann-Hilbert solve.
    rho0 : float
        Lower bound for the radius of the region where ``f`` is kept.
    taper : bool
        Shrink the disks to points at arc endpoints and keep one plane per
        arc, instead of blending the plane normals smoothly along the circle.
    """

    mu: float
    delta: float
    d: float = 1e-3
    m: int = 8
    eps: float = 0.25
    eps_fit: float = 1e-6
    eps_rh: float = 0.005
    rho0: float = 0.5
    taper: bool = False
    samples: int = 512
    max_arcs: int = 512
    N_max: int = 4096
    rh_samples: int = 128
    grid_r: int = 64
    grid_theta: int = 256
    seed: int = 0

    def __post_init__(self):
        if self.mu < 0 or not self.delta > 0 or not self.d > 0:
            raise InputError("need mu >= 0 and delta, d > 0")
        if self.m < 4 or self.m % 2:
            raise InputError("arc count m must be even and at least 4")
        if self.samples < 64:
            raise InputError("need at least 64 boundary samples")


@dataclass
class PushReport:
    arcs: int
    N: int
    rho_prime: float
    bound_I: float
    sup_I: float
    dist_before: float
    dist_after: float
    residual: float
    jittered: bool
    family_modes: int
    exp_terms: int
    rh: dict = field(default_factory=dict)

    @property
    def margin_I(self):
        return self.bound_I - self.sup_I

    @property
    def passes_I(self):
        return self.sup_I < self.bound_I

    @property
    def gain(self):
        return self.dist_after - self.dist_before

    @property
    def ineffective(self):
        return self.gain <= 0

    def as_dict(self):
        out = {k: getattr(self, k) for k in (
            "arcs", "N", "rho_prime", "bound_I", "sup_I", "margin_I", "passes_I",
            "dist_before", "dist_after", "gain", "ineffective", "residual",
            "jittered", "family_modes", "exp_terms")}
        out["rh"] = self.rh
        return out


def _target_poly(target, P):
    if callable(target):
        vals = np.asarray(target(np.exp(2j * np.pi * np.arange(P) / P)))
    else:
        vals = np.asarray(target, dtype=np.complex128)
    if vals.ndim != 2 or vals.shape[1] != 3:
        raise InputError("boundary target must be (M, 3) samples on the unit circle")
    return [fit_on_circle(vals[:, k]) for k in range(3)]


def _arc_oscillation(values, m):
    """Largest pairwise spread of ``values`` inside any of ``m`` equal arcs."""
    P = values.shape[0]
    arc = (np.arange(P) * m) // P
    worst = 0.0
    for j in range(m):
        v = values[arc == j]
        if len(v) > 1:
            worst = max(worst, float(np.linalg.norm(v[:, None] - v[None, :], axis=-1).max()))
    return worst


def _cross_spread(fv, yv, m):
    P = fv.shape[0]
    arc = (np.arange(P) * m) // P
    worst = 0.0
    for j in range(m):
        a, b = fv[arc == j], yv[arc == j]
        worst = max(worst, float(np.linalg.norm(a[:, None] - b[None, :], axis=-1).max()))
    return worst


def _blend_weights(theta, m):
    """Smooth partition of unity on the circle: cos^2 windows centred on arc midpoints."""
    width = 2 * np.pi / m
    centers = width * (np.arange(m) + 0.5)
    d = np.angle(np.exp(1j * (theta[:, None] - centers[None, :])))
    return np.where(np.abs(d) < width, np.cos(np.pi * d / (2 * width)) ** 2, 0.0)


def _taper_weight(theta, m, ramp=0.15):
    """1 inside each arc, smoothly falling to 0 at the arc endpoints."""
    s = np.mod(theta * m / (2 * np.pi), 1.0)
    edge = np.minimum(s, 1 - s) / ramp
    t = np.clip(edge, 0, 1)
    return t * t * (3 - 2 * t)


def boundary_push(f, target, params):
    """One desk-scale boundary push of a Legendrian disk (n = 1).

    Attaches flat Legendrian disks of size ``mu`` along the boundary in
    planes orthogonal to ``f - target`` and solves the Riemann-Hilbert problem
    for them. Returns ``(f_new, report)``; the report carries the measured
    bound ``|f_new - target| < sqrt(delta^2 + mu^2)`` and the gain of the
    intrinsic boundary distance. A non-positive gain is reported, not raised.
    """
    if f.n != 1 or not isinstance(f.domain, Disk) or f.domain.radius != 1.0:
        raise InputError("boundary_push works on unit-disk curves in C^3")
    P = params.samples
    theta = 2 * np.pi * np.arange(P) / P
    u = np.exp(1j * theta)
    ypoly = _target_poly(target, P)
    fu = f(u)
    yu = np.stack([p(u) for p in ypoly], axis=-1)
    dist0 = float(np.linalg.norm(fu - yu, axis=-1).max())
    if dist0 >= params.delta:
        raise TargetTooFar(f"max |f - target| = {dist0:.4g} is not below delta = {params.delta:g}")

    m = params.m
    while (_arc_oscillation(fu, m) >= params.eps or _arc_oscillation(yu, m) >= params.eps
           or _cross_spread(fu, yu, m) >= params.delta):
        m *= 2
        if m > min(params.max_arcs, P // 2):
            raise NotConverged("arc subdivision did not reach the oscillation tolerance")

    rng = np.random.default_rng(params.seed)
    anchors = np.exp(2j * np.pi * (np.arange(m) + 0.5) / m)
    G_anchor = f(anchors) - np.stack([p(anchors) for p in ypoly], axis=-1)
    jittered = False
    try:
        plane_from_normal(G_anchor)
    except NormalDegenerate:
        G_anchor = jitter_normals(G_anchor, rng)
        jittered = True
        plane_from_normal(G_anchor)
    if params.taper:
        G = G_anchor[((np.arange(P) * m) // P)]
    else:
        w = _blend_weights(theta, m)
        G = (w @ G_anchor) / w.sum(axis=1, keepdims=True)

    exp_terms, modes = 0, 0
    if params.mu == 0:
        fam = BoundaryFamily.constant(f)
    else:
        disks = boundary_disk_family(fu, G, params.mu)
        s = disks.scale * (_taper_weight(theta, m) if params.taper else 1.0)
        ratio = s / disks.a
        amp = disks.base[:, 0] - disks.b
        tail_tol = params.eps_fit * params.mu
        J = 1
        while True:
            r = np.abs(ratio)
            tail = np.abs(amp) * r ** (J + 1) * np.exp(r) / math.factorial(J + 1)
            if tail.max() < tail_tol or J >= 40:
                break
            J += 1
        exp_terms = J
        raw = [amp * ratio ** j / math.factorial(j) for j in range(1, J + 1)]
        modes = 8
        while True:
            a_fit = [fit_on_circle(c, modes, 1e-3 * params.eps_fit) for c in raw]
            b_fit = fit_on_circle(s, modes, 1e-3 * params.eps_fit)
            err = max(np.abs(p(u) - c).max() for p, c in zip(a_fit + [b_fit], raw + [s]))
            if err < tail_tol or 2 * modes > (P - 1) // 2:
                break
            modes *= 2
        fam = BoundaryFamily.from_center(f, [a_fit], [[b_fit]])

    G_new, rho_p, N, rh_rep = rh_approximate(
        f, fam, params.eps_rh, params.rho0, N_max=params.N_max, samples=params.rh_samples)

    check = np.exp(2j * np.pi * np.arange(P) / P)
    y_check = np.stack([p(check) for p in ypoly], axis=-1)
    sup_I = float(np.linalg.norm(G_new(check) - y_check, axis=-1).max())
    before = intrinsic_distance(f, params.grid_r, params.grid_theta)
    after = intrinsic_distance(G_new, params.grid_r, params.grid_theta)
    report = PushReport(
        arcs=m, N=N, rho_prime=rho_p,
        bound_I=math.sqrt(params.delta ** 2 + params.mu ** 2), sup_I=sup_I,
        dist_before=before, dist_after=after,
        residual=legendrian_residual(G_new, 128), jittered=jittered,
        family_modes=modes, exp_terms=exp_terms, rh=rh_rep.as_dict())
    return G_new, report


def require_effective(report):
    """Raise :class:`PushIneffective` when a push produced no distance gain."""
    if report.ineffective:
        raise PushIneffective(f"intrinsic distance changed by {report.gain:.3g}")
    return report
