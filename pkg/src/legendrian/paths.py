"""Approximation of arbitrary paths in C^{2n+1} by Legendrian paths.

The (x, y) part of the input is replaced by a quintic spline, and z is rebuilt as
``z(t) = z(0) - int_0^t sum_j x_j y_j' ds``. On each piece of a dyadic
subdivision the z mismatch at the piece end is removed by a windowed bump
``W phi(s) e^{2 pi i k s}`` added to ``x_1``. When ``y_1`` barely moves, a
counter-rotating loop ``A phi(s) e^{-2 pi i k s}`` is first grafted into
``y_1``. ``W`` enters the integral linearly and is solved for directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, make_interp_spline

from . import _backend
from .errors import (
    DerivativeNotLegendrianAtEndpoint,
    InputError,
    InvariantBreach,
    ToleranceUnreachable,
)
from .geometry import EmbeddingReport

RAMP = 0.05
# max_l |phi^(l)|^(1/l) of the C^5 smoothstep, per unit of ramp width
RAMP_RATE = 6.4
MAX_PIECES = 1024
MAX_LOOPS = 8192
MAX_SAMPLES = 2 ** 21
MIN_SAMPLES_PER_TURN = 64
# bound on the difference-quotient residual per unit scale; 2.5x below the 1e-8 contract
RESIDUAL_TARGET = 4e-9
EMBED_SAMPLES = 2048
EMBED_RETRIES = 8
_GL5 = np.polynomial.legendre.leggauss(5)


@dataclass
class SampledPath:
    """Samples ``points[k]`` of a path at ``0 = t[0] < ... < t[M] = 1``."""

    t: np.ndarray
    points: np.ndarray
    start_derivative: np.ndarray | None = None
    end_derivative: np.ndarray | None = None

    def __post_init__(self):
        t = np.asarray(self.t, dtype=np.float64)
        p = np.asarray(self.points, dtype=np.complex128)
        if t.ndim != 1 or p.ndim != 2 or p.shape[0] != t.size:
            raise InputError("need one point per parameter sample")
        if t.size < 9:
            raise InputError("a sampled path needs at least 9 samples")
        if p.shape[1] < 3 or p.shape[1] % 2 == 0:
            raise InputError("points must lie in C^{2n+1}")
        if t[0] != 0.0 or t[-1] != 1.0 or np.any(np.diff(t) <= 0):
            raise InputError("parameters must increase strictly from 0 to 1")
        if not np.all(np.isfinite(p)):
            raise InputError("path points must be finite")
        self.t, self.points = t, p
        for name in ("start_derivative", "end_derivative"):
            d = getattr(self, name)
            if d is not None:
                d = np.asarray(d, dtype=np.complex128)
                if d.shape != (p.shape[1],):
                    raise InputError(f"{name} has the wrong length")
                setattr(self, name, d)

    @property
    def n(self):
        return (self.points.shape[1] - 1) // 2

    def __len__(self):
        return self.t.size

    def interpolate(self, t):
        """Piecewise-linear interpolation at parameters ``t``."""
        return _linear(self.t, self.points, np.asarray(t, dtype=np.float64))

    def derivative(self):
        """Cached sample derivatives from 5-point Lagrange stencils.

        On a uniform grid this is the 4th-order central difference. The two
        samples at each end use 3-point (2nd-order) formulas.
        """
        if getattr(self, "_derivative", None) is None:
            self._derivative = sample_derivative(self.t, self.points)
        return self._derivative

    def endpoint_derivatives(self):
        d = None
        if self.start_derivative is None or self.end_derivative is None:
            d = self.derivative()
        d0 = self.start_derivative if self.start_derivative is not None else d[0]
        d1 = self.end_derivative if self.end_derivative is not None else d[-1]
        return d0, d1

    def legendrian_residual(self):
        """``(|z' + sum x_j y_j'|, scale)`` at samples away from both ends.

        The scale is ``1 + max|z'| + sum_j max|x_j| max|y_j'|``.
        """
        d = self.derivative()
        n = self.n
        x, dy = self.points[:, 0:2 * n:2], d[:, 1:2 * n:2]
        res = np.abs(d[:, -1] + np.sum(x * dy, axis=1))[2:-2]
        scale = 1.0 + np.abs(d[:, -1]).max() + float(np.sum(np.abs(x).max(0) * np.abs(dy).max(0)))
        return res, float(scale)


def _derivative_weights(off):
    """Weights of the 5-point Lagrange derivative at the middle node."""
    w = np.empty_like(off)
    for j in (0, 1, 3, 4):
        others = [m for m in range(5) if m not in (j, 2)]
        num = np.prod(-off[:, others], axis=1)
        den = np.prod([off[:, j] - off[:, m] for m in range(5) if m != j], axis=0)
        w[:, j] = num / den
    w[:, 2] = -np.sum(1.0 / off[:, [0, 1, 3, 4]], axis=1)
    return w


def _junction_rows(t, lo, hi):
    """Rows whose stencil ``[k + lo, k + hi]`` of intervals meets a spacing change."""
    h = np.diff(t)
    jumps = np.flatnonzero(np.abs(h[1:] / h[:-1] - 1.0) > 1e-9)
    if not jumps.size:
        return np.zeros(0, np.int64)
    near = (jumps[:, None] - np.arange(lo, hi + 1)[None, :]).ravel()
    return np.unique(near[(near >= 0) & (near < h.size)])


_CENTRAL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0


def sample_derivative(t, p):
    """Derivative of samples ``p`` (first axis) on the grid ``t``.

    Interior samples use 5-point Lagrange stencils, which reduce to the
    4th-order central difference wherever the grid is locally uniform. The
    two samples at each end use 3-point (2nd-order) formulas.
    """
    p = np.asarray(p)
    d = np.empty_like(p)
    edge = np.gradient(p[:3], t[:3], axis=0, edge_order=2)
    d[0], d[1] = edge[0], edge[1]
    edge = np.gradient(p[-3:], t[-3:], axis=0, edge_order=2)
    d[-1], d[-2] = edge[-1], edge[-2]
    if t.size > 4:
        h = 0.5 * (t[3:-1] - t[1:-3])
        win = np.lib.stride_tricks.sliding_window_view(p, 5, axis=0)
        d[2:-2] = (win @ _CENTRAL) / h.reshape((-1,) + (1,) * (p.ndim - 1))
        # interior row r is centred on sample r + 2 and spans intervals r .. r + 3
        rows = _junction_rows(t, 0, 3)
        rows = rows[rows < h.size]
        if rows.size:
            off = t[rows[:, None] + np.arange(5)] - t[rows + 2, None]
            w = _derivative_weights(off)
            d[rows + 2] = np.einsum("kj,k...j->k...", w, win[rows])
    return d


def _quadrature_weights(u):
    order = u.shape[1]
    vander = u[:, None, :] ** np.arange(order)[None, :, None]
    moments = np.broadcast_to(1.0 / np.arange(1, order + 1), (u.shape[0], order))
    return np.linalg.solve(vander, moments[..., None])[..., 0]


def cumulative_integral(t, f, order=8):
    """``int_{t_0}^{t_k} f`` at every sample by local interpolation.

    Each interval integrates the degree ``order-1`` interpolant through the
    nearest ``order`` samples.
    """
    m = t.size - 1
    if m < order:
        raise InputError("too few samples for the quadrature stencil")
    back = order // 2 - 1
    h = np.diff(t)
    shift = np.clip(np.arange(m) - back, 0, m + 1 - order)
    ref = np.arange(order)[None, :] - back
    w_mid = _quadrature_weights(ref.astype(float))[0]
    inc = np.empty(m, dtype=np.result_type(f, np.float64))
    win = np.lib.stride_tricks.sliding_window_view(f, order)
    inc[back:m + 2 - order + back] = win @ w_mid
    rows = np.unique(np.concatenate([
        np.arange(back), np.arange(m + 2 - order + back, m),
        _junction_rows(t, -back, order - back - 2)]))
    if rows.size:
        idx = shift[rows, None] + np.arange(order)[None, :]
        u = (t[idx] - t[rows, None]) / h[rows, None]
        inc[rows] = np.sum(_quadrature_weights(u) * f[idx], axis=1)
    return np.concatenate([[0.0], np.cumsum(h * inc)])


def _row_norm(a):
    """Euclidean norm of each row of a complex array."""
    r = np.ascontiguousarray(a).view(np.float64)
    return np.sqrt(np.einsum("ij,ij->i", r, r))


def _linear(t_in, vals, t):
    out = np.empty((t.size, vals.shape[1]), np.complex128)
    for j in range(vals.shape[1]):
        out[:, j] = np.interp(t, t_in, vals[:, j].real) + 1j * np.interp(t, t_in, vals[:, j].imag)
    return out


def window(s):
    """Plateau window on [0, 1] with C^5 smoothstep ramps; returns ``(phi, dphi/ds)``.

    C^5 keeps the 5-point differences 4th order across piece junctions.
    """
    s = np.asarray(s, dtype=np.float64)
    u = np.minimum(s, 1.0 - s) / RAMP
    phi, dphi = np.ones_like(u), np.zeros_like(u)
    ramp = u < 1
    u = np.maximum(u[ramp], 0.0)
    phi[ramp] = u ** 6 * (462 + u * (-1980 + u * (3465 + u * (-3080 + u * (1386 - 252 * u)))))
    dphi[ramp] = 2772 * (u * (1 - u)) ** 5 * np.where(s[ramp] < 0.5, 1.0, -1.0) / RAMP
    return phi, dphi


# -- continuous representation ----------------------------------------------------

@dataclass
class Piece:
    ta: float
    tb: float
    W: complex = 0j
    A: complex = 0j
    k: int = 0

    @property
    def T(self):
        return self.tb - self.ta


def _terms(piece_k, W, A, T, s):
    """Bump on x_1 and loop on y_1 with their t-derivatives.

    The loop is the conjugate phase of the bump, so both share ``phi e^{i w s}``.
    """
    phi, dphi = window(s)
    w = 2j * np.pi * piece_k
    E = np.exp(w * s)
    pE = phi * E
    G = dphi * E + w * pE
    return W * pE, (W / T) * G, A * np.conj(pE), (A / T) * np.conj(G)


class PathCurve:
    """Spline base plus the per-piece bumps and loops."""

    def __init__(self, spline, pieces, z0):
        self.spline = spline
        self.dspline = spline.derivative()
        self.pieces = sorted(pieces, key=lambda p: p.ta)
        self.z0 = z0
        self._ta = np.array([p.ta for p in self.pieces])
        self._arr = [np.array(v) for v in zip(*[(p.T, p.W, p.A, p.k) for p in self.pieces])]

    @property
    def n(self):
        return self.spline.c.shape[-1] // 2

    def xy(self, t, derivative=False):
        t = np.asarray(t, dtype=np.float64)
        v = np.asarray(self.spline(t), dtype=np.complex128)
        dv = np.asarray(self.dspline(t), dtype=np.complex128)
        idx = np.clip(np.searchsorted(self._ta, t, side="right") - 1, 0, len(self.pieces) - 1)
        T, W, A, k = (a[idx] for a in self._arr)
        s = (t - self._ta[idx]) / T
        bx, dbx, ly, dly = _terms(k, W, A, T, s)
        v[:, 0] += bx
        v[:, 1] += ly
        dv[:, 0] += dbx
        dv[:, 1] += dly
        return (v, dv) if derivative else v

    def z_rate(self, t):
        """``-sum_j x_j y_j'``, the derivative of z along the curve."""
        v, dv = self.xy(t, derivative=True)
        return -np.sum(v[:, 0::2] * dv[:, 1::2], axis=1)

    def __call__(self, t):
        """Points at sorted parameters ``t`` with z integrated along the samples."""
        t = np.asarray(t, dtype=np.float64)
        v, dv = self.xy(t, derivative=True)
        z = self.z0 - cumulative_integral(t, np.sum(v[:, 0::2] * dv[:, 1::2], axis=1))
        return np.column_stack([v, z])


# -- construction -----------------------------------------------------------------

@dataclass
class PathReport:
    pieces: int
    loops: int
    samples: int
    spline_deviation: float
    xy_deviation: float
    deviation: float
    residual: float
    residual_scale: float
    endpoint_error: float
    embedding: EmbeddingReport | None
    retries: int
    curve: PathCurve = field(repr=False)

    def as_dict(self):
        out = {k: getattr(self, k) for k in (
            "pieces", "loops", "samples", "spline_deviation", "xy_deviation", "deviation",
            "residual", "residual_scale", "endpoint_error", "retries")}
        if self.embedding is not None:
            out["min_gap"] = self.embedding.min_gap
            out["injective"] = self.embedding.injective
        return out


def _endpoint_check(gamma):
    d0, d1 = gamma.endpoint_derivatives()
    n = gamma.n
    for p, d in ((gamma.points[0], d0), (gamma.points[-1], d1)):
        res = abs(d[-1] + np.sum(p[0:2 * n:2] * d[1:2 * n:2]))
        if res > 1e-6 * (1 + np.abs(d).max() * (1 + np.abs(p).max())):
            raise DerivativeNotLegendrianAtEndpoint(f"endpoint derivative misses ker eta by {res:.3g}")
    return d0, d1


def _quintic(knots, vals, clamp):
    """Quintic interpolating spline; clamped ends also pin the cubic-spline curvature."""
    if clamp is None:
        return make_interp_spline(knots, vals, k=5)
    cubic = CubicSpline(knots, vals, bc_type=((1, clamp[0]), (1, clamp[1])))
    curv = cubic(knots[[0, -1]], 2)
    bc = ([(1, clamp[0]), (2, curv[0])], [(1, clamp[1]), (2, curv[1])])
    return make_interp_spline(knots, vals, k=5, bc_type=bc)


def _base_spline(gamma, eps, clamp):
    """Quintic spline through the (x, y) samples, refined until it hugs the polyline.

    Quintic rather than cubic: the jumps of the fifth derivative at the knots
    keep the 4th-order difference residual small near corners of the input.
    """
    n = gamma.n
    knots, vals = gamma.t, gamma.points[:, :2 * n]
    for _ in range(12):
        spline = _quintic(knots, vals, clamp)
        probe = (knots[:-1, None] + np.diff(knots)[:, None] * np.array([0.25, 0.5, 0.75])).ravel()
        dev = _row_norm(spline(probe) - _linear(gamma.t, gamma.points[:, :2 * n], probe))
        if dev.max() <= eps / 8:
            return spline, float(dev.max()), knots
        knots = np.sort(np.concatenate([knots, 0.5 * (knots[:-1] + knots[1:])]))
        vals = _linear(gamma.t, gamma.points[:, :2 * n], knots)
    raise ToleranceUnreachable("spline base cannot follow the path within eps/8")


class _PieceSolver:
    def __init__(self, gamma, spline, eps, budget):
        self.gamma = gamma
        self.spline = spline
        self.dspline = spline.derivative()
        self.amp = budget / math.sqrt(2)
        self.dev_max = 0.95 * eps / 2
        self.n = gamma.n
        zs = gamma.points[:, -1]
        self.skip = 1e-12 * (1 + np.abs(gamma.points).max() ** 2)
        self.z_at = lambda t: np.interp(t, gamma.t, zs.real) + 1j * np.interp(t, gamma.t, zs.imag)
        s = np.linspace(0, 1, 4001)
        self.phi_sq = float(np.trapezoid(window(s)[0] ** 2, s))

    def _grid(self, ta, tb, k):
        q = 32 + 8 * (k + 4)
        edges = np.linspace(ta, tb, q + 1)
        g, w = _GL5
        h = edges[1] - edges[0]
        nodes = (edges[:-1, None] + 0.5 * h * (1 + g[None, :])).ravel()
        return edges, nodes, 0.5 * h * np.tile(w, q), g.size

    def solve(self, ta, tb, phase):
        T = tb - ta
        R = complex(self.z_at(ta) - self.z_at(tb))
        k, A = 0, 0j
        for _ in range(12):
            edges, nodes, wts, per = self._grid(ta, tb, k)
            v = np.array(self.spline(nodes), np.complex128)
            dv = np.array(self.dspline(nodes), np.complex128)
            s = (nodes - ta) / T
            J0 = np.sum(v[:, 0::2] * dv[:, 1::2], axis=1)
            delta = R - np.sum(J0 * wts)
            if k == 0 and abs(delta) <= self.skip:
                return self._check(Piece(ta, tb), edges, nodes, v, dv, J0, wts, per, s)
            unit_bx, _, ly, dly = _terms(k, 1.0, A, T, s)
            I1 = np.sum(unit_bx * (dv[:, 1] + dly) * wts)
            K1 = np.sum(v[:, 0] * dly * wts)
            W = (delta - K1) / I1 if I1 != 0 else np.inf
            if abs(W) <= self.amp:
                piece = Piece(ta, tb, complex(W), complex(A), k)
                return self._check(piece, edges, nodes, v, dv, J0, wts, per, s)
            # graft or strengthen the loop so that |W| fits the budget
            mag = min(self.amp, 1.5 * math.sqrt(abs(delta) / (2 * np.pi * self.phi_sq)))
            A = mag * np.exp(1j * phase)
            need = abs(delta) / (mag * self.amp * 2 * np.pi * self.phi_sq)
            k_new = max(1, math.ceil(1.2 * need), math.ceil(1.1 * k * abs(W) / self.amp) if k else 0)
            if k_new > MAX_LOOPS:
                return None
            k = k_new
        return None

    def _check(self, piece, edges, nodes, v, dv, J0, wts, per, s):
        bx, dbx, ly, dly = _terms(piece.k, piece.W, piece.A, piece.T, s)
        rate = J0 + bx * (dv[:, 1] + dly) + v[:, 0] * dly
        z = self.z_at(piece.ta) - np.concatenate([[0], np.cumsum((rate * wts).reshape(-1, per).sum(1))])
        zdev = np.abs(z - self.z_at(edges)).max()
        xy = np.array(v)
        xy[:, 0] += bx
        xy[:, 1] += ly
        ref = _linear(self.gamma.t, self.gamma.points[:, :2 * self.n], nodes)
        xydev = _row_norm(xy - ref).max()
        if zdev > self.dev_max or xydev > self.dev_max:
            return None
        return piece


def _close_end(curve, t, pts, z_end):
    """Re-solve the last bump amplitude against the output quadrature (in place).

    The piece solver and the sample quadrature agree only to the size of the
    spline knot effects, so the final z mismatch is removed here exactly.
    """
    last = curve.pieces[-1]
    first = int(np.searchsorted(t, last.ta))
    # the gain is zero before the piece; start one stencil early so the sums match
    lead = max(0, first - 8)
    s = (t[first:] - last.ta) / last.T
    unit, _, _, dly = _terms(last.k, 1.0, last.A, last.T, s)
    gain_rate = np.zeros(t.size - lead, np.complex128)
    gain_rate[first - lead:] = unit * (np.asarray(curve.dspline(t[first:]))[:, 1] + dly)
    gain = cumulative_integral(t[lead:], gain_rate)
    if gain[-1] == 0:
        return curve
    dW = (pts[-1, -1] - z_end) / gain[-1]
    pts[first:, 0] += dW * unit
    pts[lead:, -1] -= dW * gain
    last.W += dW
    return PathCurve(curve.spline, curve.pieces, curve.z0)


def _subdivide(solver, rng):
    done, stack, budget = [], [(0.0, 1.0)], 0
    while stack:
        ta, tb = stack.pop()
        piece = solver.solve(ta, tb, rng.uniform(0, 2 * np.pi))
        if piece is not None:
            done.append(piece)
            budget += MIN_SAMPLES_PER_TURN * (piece.k + 4)
            if budget > MAX_SAMPLES:
                raise ToleranceUnreachable(f"more than {MAX_SAMPLES} samples needed")
            continue
        if len(done) + len(stack) + 2 > MAX_PIECES:
            raise ToleranceUnreachable(f"more than {MAX_PIECES} pieces needed")
        mid = 0.5 * (ta + tb)
        stack += [(mid, tb), (ta, mid)]
    return done


def _scale_floor(spline, pieces, knots):
    """Lower estimate of the residual scale ``1 + max|z'| + sum_j max|x_j| max|y_j'|``.

    Over a full turn ``max |a + W e^{i theta}| = |a| + |W|``, so the larger of
    the spline and loop sizes bounds each factor from below; ``|z'|`` reaches
    the same size as the ``j = 1`` product.
    """
    t = np.concatenate([knots, 0.5 * (knots[:-1] + knots[1:])])
    x = np.abs(np.asarray(spline(t)))[:, 0::2].max(0)
    dy = np.abs(np.asarray(spline.derivative()(t)))[:, 1::2].max(0)
    x[0] = max(x[0], max(abs(p.W) for p in pieces))
    dy[0] = max(dy[0], max(abs(p.A) * 2 * np.pi * p.k / p.T for p in pieces))
    return 1.0 + 0.8 * float(np.sum(x * dy) + x[0] * dy[0])


def _spline_bounds(spline, knots):
    """Per knot interval: the spline-only residual density and ``max |x_1^(m)|``, ``max |y_1^(m)|``.

    The density is ``|z^(5)| + sum_j |x_j| |y_j^(5)|`` with ``z^(5) = -sum_j (x_j y_j')^(4)``.
    """
    t = (knots[:-1, None] + np.diff(knots)[:, None] * np.linspace(0, 1, 9)[None, :]).ravel()
    d = [np.asarray(spline.derivative(m)(t)) if m else np.asarray(spline(t)) for m in range(6)]
    x = lambda m: d[m][:, 0::2]  # noqa: E731
    y = lambda m: d[m][:, 1::2]  # noqa: E731
    z5 = sum(math.comb(4, i) * x(i) * y(5 - i) for i in range(5)).sum(axis=1)
    f = np.abs(z5) + np.sum(np.abs(x(0) * y(5)), axis=1)
    per = lambda v: np.abs(v).reshape(len(knots) - 1, 9, -1).max(axis=1)  # noqa: E731
    a = np.column_stack([per(x(m)[:, :1]) for m in range(6)])
    b = np.column_stack([per(y(m)[:, :1]) for m in range(6)])
    return per(f[:, None])[:, 0], a, b


def _residual_density(piece, spline_part, a, b):
    """Bound on ``|sum_{i>=1} C(4, i) x_1^(i) y_1^(5-i)|`` plus the spline-only part.

    The 4th-order difference residual is ``h**4 / 30`` times this. With the
    bump ``W e^{i w s}`` and loop ``A e^{-i w s}`` the loop-loop terms sum to
    ``|W| |A| w**5``; the window ramps are folded into an effective ``w``.
    The ``i = 0`` spline-loop term cancels between ``z'`` and ``x_1 y_1'``.
    """
    if piece.k == 0:
        return spline_part
    w = 2 * np.pi * piece.k / piece.T + RAMP_RATE / (RAMP * piece.T)
    W, A = abs(piece.W), abs(piece.A)
    cross = sum(math.comb(4, i) * (a[i] * A * w ** (5 - i) + W * w ** i * b[5 - i]) for i in range(1, 5))
    return W * A * w ** 5 + cross + spline_part


def _output_grid(pieces, knots, spline):
    """Uniform grid on each piece, dense enough for its loops, the spline and the knots."""
    base = 8.0 / np.diff(knots).min()
    scale = _scale_floor(spline, pieces, knots)
    fifth, a, b = _spline_bounds(spline, knots)
    parts, total = [], 0
    for p in sorted(pieces, key=lambda p: p.ta):
        lo = max(0, np.searchsorted(knots, p.ta, "right") - 1)
        hi = max(lo + 1, np.searchsorted(knots, p.tb))
        dens = _residual_density(p, fifth[lo:hi].max(), a[lo:hi].max(0), b[lo:hi].max(0))
        count = p.T * (dens / (30 * RESIDUAL_TARGET * scale)) ** 0.25
        count = max(64, MIN_SAMPLES_PER_TURN * (p.k + 4), math.ceil(max(count, base * p.T)))
        total += count
        parts.append(np.linspace(p.ta, p.tb, count + 1)[:-1])
    if total > MAX_SAMPLES:
        raise ToleranceUnreachable(f"{total} samples needed for the oscillation")
    return np.concatenate(parts + [[1.0]])


def _path_embedding(path):
    step = max(1, (len(path) - 1) // EMBED_SAMPLES)
    idx = np.arange(0, len(path), step)
    params = np.ascontiguousarray(path.t[idx].astype(np.complex128))
    vals = np.ascontiguousarray(path.points[idx])
    gap, sep, adm = _backend.get().min_pair_gap(params, vals, 0.05)
    speed = float(_row_norm(path.derivative()).min())
    return EmbeddingReport(float(gap), speed, float(sep), float(adm), 0.05, idx.size)


def legendrian_path_approx(gamma, eps, match_end_derivatives=False, *, seed=0, report=False):
    """Legendrian path within ``eps`` of ``gamma`` with the same endpoints.

    Parameters
    ----------
    gamma : SampledPath
        Continuous, piecewise smooth path.
    eps : float
        Sup-norm tolerance. The (x, y) part stays within ``eps/2`` and so does z.
    match_end_derivatives : bool
        Clamp the spline to the endpoint derivatives of ``gamma``, which must
        lie in ``ker eta``.
    seed : int
        Seeds the loop phases. Up to 8 fresh draws are tried when the
        embedding check flags a self-intersection.
    report : bool
        Also return a :class:`PathReport`.
    """
    if not isinstance(gamma, SampledPath):
        raise InputError("gamma must be a SampledPath")
    if not eps > 0:
        raise InputError("eps must be positive")
    n = gamma.n
    clamp = None
    if match_end_derivatives:
        d0, d1 = _endpoint_check(gamma)
        clamp = (d0[:2 * n], d1[:2 * n])
    spline, spline_dev, knots = _base_spline(gamma, eps, clamp)
    budget = 0.95 * eps / 2 - spline_dev
    solver = _PieceSolver(gamma, spline, eps, budget)
    rng = np.random.default_rng(seed)
    p0, p1 = gamma.points[0], gamma.points[-1]

    best = None
    for attempt in range(EMBED_RETRIES + 1):
        pieces = _subdivide(solver, rng)
        curve = PathCurve(spline, pieces, p0[-1])
        t = _output_grid(pieces, knots, spline)
        pts = curve(t)
        end_err = float(np.abs(pts[-1] - p1).max())
        if end_err > 1e-6 * (1 + np.abs(gamma.points).max() ** 2):
            raise InvariantBreach(f"endpoint missed by {end_err:.3g}")
        curve = _close_end(curve, t, pts, p1[-1])
        end_err = float(np.abs(pts[-1] - p1).max())
        pts[0], pts[-1] = p0, p1
        d_start, d_end = (np.append(v, r) for v, r in zip(
            curve.xy(np.array([0.0, 1.0]), derivative=True)[1], curve.z_rate(np.array([0.0, 1.0]))))
        path = SampledPath(t, pts, d_start, d_end)
        emb = _path_embedding(path)
        best = (path, curve, emb, attempt, pieces)
        if emb.injective or not any(p.k for p in pieces):
            break

    path, curve, emb, attempt, pieces = best
    if not report:
        return path
    res, scale = path.legendrian_residual()
    ref = gamma.interpolate(path.t)
    rep = PathReport(
        pieces=len(pieces),
        loops=sum(p.k for p in pieces),
        samples=len(path),
        spline_deviation=spline_dev,
        xy_deviation=float(_row_norm(path.points[:, :2 * n] - ref[:, :2 * n]).max()),
        deviation=float(_row_norm(path.points - ref).max()),
        residual=float(res.max()) if res.size else 0.0,
        residual_scale=scale,
        endpoint_error=end_err,
        embedding=emb,
        retries=attempt,
        curve=curve,
    )
    return path, rep
