"""Polynomial contact Hamiltonian fields on C^{2n+1} and their flows.

Variables are ordered ``(x_1, y_1, ..., x_n, y_n, z)``. A :class:`PolyFunction`
stores a sparse map from exponent tuples to coefficients; coefficients may be
any numbers (Python complex, ``fractions.Fraction`` or sympy numbers), so
symbolic identities hold exactly when the inputs are exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy as sp

from .contact import ContactPoint, eta, kernel_basis
from .errors import BasisDegenerate, Diverged, InputError

DIVERGENCE_NORM = 1e12


def variable_names(n):
    names = []
    for j in range(1, n + 1):
        names += [f"x{j}", f"y{j}"]
    return names + ["z"]


def _is_zero(c):
    return c == 0


class PolyFunction:
    """Sparse polynomial in the 2n+1 contact coordinates."""

    __slots__ = ("n", "terms", "_compiled")

    def __init__(self, n, terms=None):
        if n < 1:
            raise InputError("n must be at least 1")
        self.n = int(n)
        dim = 2 * self.n + 1
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != dim or min(exp) < 0:
                raise InputError(f"exponent {exp} is not a nonnegative {dim}-tuple")
            total = clean.get(exp, 0) + c
            if _is_zero(total):
                clean.pop(exp, None)
            else:
                clean[exp] = total
        self.terms = clean
        self._compiled = None

    # -- constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, n, c):
        return cls(n, {(0,) * (2 * n + 1): c})

    @classmethod
    def variable(cls, n, index, coeff=1):
        exp = [0] * (2 * n + 1)
        exp[index] = 1
        return cls(n, {tuple(exp): coeff})

    @classmethod
    def from_sympy(cls, expr, n):
        """Parse a polynomial expression in ``x1, y1, ..., xn, yn, z``."""
        names = variable_names(n)
        symbols = sp.symbols(names)
        if isinstance(expr, str):
            expr = sp.sympify(expr, locals=dict(zip(names, symbols)))
        extra = expr.free_symbols - set(symbols)
        if extra:
            raise InputError(f"unknown variables {sorted(map(str, extra))}")
        try:
            poly = sp.Poly(sp.expand(expr), *symbols)
        except sp.PolynomialError as exc:
            raise InputError(f"not a polynomial: {expr}") from exc
        return cls(n, dict(poly.terms()))

    def to_sympy(self):
        symbols = sp.symbols(variable_names(self.n))
        return sp.Add(*[sp.sympify(c) * sp.Mul(*[s ** e for s, e in zip(symbols, exp)])
                        for exp, c in self.terms.items()])

    # -- algebra --------------------------------------------------------------
    def _same(self, other):
        if isinstance(other, PolyFunction):
            if other.n != self.n:
                raise InputError("dimension mismatch")
            return other
        return PolyFunction.constant(self.n, other)

    def __add__(self, other):
        other = self._same(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            terms[exp] = terms.get(exp, 0) + c
        return PolyFunction(self.n, terms)

    __radd__ = __add__

    def __neg__(self):
        return PolyFunction(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        if not isinstance(other, PolyFunction):
            return PolyFunction(self.n, {e: c * other for e, c in self.terms.items()})
        other = self._same(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return PolyFunction(self.n, terms)

    __rmul__ = __mul__

    def partial(self, index):
        terms = {}
        for exp, c in self.terms.items():
            k = exp[index]
            if k:
                e = list(exp)
                e[index] = k - 1
                terms[tuple(e)] = terms.get(tuple(e), 0) + c * k
        return PolyFunction(self.n, terms)

    def is_zero(self):
        return not self.terms

    @property
    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, PolyFunction):
            other = PolyFunction.constant(self.n, other)
        return self.n == other.n and (self - other).is_zero()

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    def __repr__(self):
        return f"PolyFunction({self.to_sympy()})"

    # -- evaluation -----------------------------------------------------------
    def _arrays(self):
        if self._compiled is None:
            if self.terms:
                exps = np.array(list(self.terms), dtype=np.int64)
                coefs = np.array([complex(c) for c in self.terms.values()], np.complex128)
            else:
                exps = np.zeros((0, 2 * self.n + 1), np.int64)
                coefs = np.zeros(0, np.complex128)
            self._compiled = (exps, coefs)
        return self._compiled

    def __call__(self, points):
        p = np.asarray(points, dtype=np.complex128)
        if p.shape[-1] != 2 * self.n + 1:
            raise InputError("points need 2n+1 coordinates")
        exps, coefs = self._arrays()
        if not coefs.size:
            return np.zeros(p.shape[:-1], np.complex128)
        mono = np.prod(p[..., None, :] ** exps, axis=-1)
        return mono @ coefs


@dataclass(frozen=True)
class PolyVectorField:
    """Components in coordinate order ``(x_1, y_1, ..., z)``."""

    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise InputError("empty vector field")
        n = comps[0].n
        if len(comps) != 2 * n + 1 or any(c.n != n for c in comps):
            raise InputError("a vector field on C^{2n+1} needs 2n+1 components")
        object.__setattr__(self, "components", comps)

    @property
    def n(self):
        return self.components[0].n

    @classmethod
    def coordinate(cls, n, index, coeff=1):
        """The constant field ``coeff * d/d(coordinate index)``."""
        comps = [PolyFunction(n) for _ in range(2 * n + 1)]
        comps[index] = PolyFunction.constant(n, coeff)
        return cls(tuple(comps))

    @classmethod
    def from_sympy(cls, exprs, n):
        return cls(tuple(PolyFunction.from_sympy(e, n) for e in exprs))

    def __add__(self, other):
        return PolyVectorField(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        return PolyVectorField(tuple(a - b for a, b in zip(self.components, other.components)))

    def scaled(self, f):
        return PolyVectorField(tuple(c * f for c in self.components))

    def __eq__(self, other):
        return isinstance(other, PolyVectorField) and all(
            a == b for a, b in zip(self.components, other.components))

    def __hash__(self):
        return hash(self.components)

    def __call__(self, points):
        return np.stack([c(points) for c in self.components], axis=-1)

    def apply(self, f):
        """Directional derivative ``V(f) = sum_i V_i d_i f``."""
        total = PolyFunction(self.n)
        for i, c in enumerate(self.components):
            total = total + c * f.partial(i)
        return total

    def contract_eta(self):
        """``V _| eta = V_z + sum_j x_j V_{y_j}``."""
        n = self.n
        total = self.components[-1]
        for j in range(n):
            total = total + PolyFunction.variable(n, 2 * j) * self.components[2 * j + 1]
        return total

    def contract_deta(self):
        """Coefficients of ``V _| d eta`` on ``(dx_1, dy_1, ..., dz)``."""
        n = self.n
        out = []
        for j in range(n):
            out += [-self.components[2 * j + 1], self.components[2 * j]]
        return out + [PolyFunction(n)]

    def lie_derivative_eta(self):
        """``L_V eta = d(V _| eta) + V _| d eta`` (Cartan), as 1-form coefficients."""
        g = self.contract_eta()
        return [g.partial(i) + c for i, c in enumerate(self.contract_deta())]


def lie_bracket(V, W):
    """``[V, W]_i = V(W_i) - W(V_i)``."""
    return PolyVectorField(tuple(V.apply(wi) - W.apply(vi)
                                 for vi, wi in zip(V.components, W.components)))


def eta_form(n):
    """Coefficients of ``eta`` on ``(dx_1, dy_1, ..., dz)``."""
    out = []
    for j in range(n):
        out += [PolyFunction(n), PolyFunction.variable(n, 2 * j)]
    return out + [PolyFunction.constant(n, 1)]


def differential(h):
    return [h.partial(i) for i in range(2 * h.n + 1)]


def reeb_field(n):
    return PolyVectorField.coordinate(n, 2 * n)


def contact_hamiltonian_field(h):
    """The contact field ``V_h`` with ``V_h _| eta = h``.

    ``V_h = (h - sum_j x_j h_{x_j}) d_z + sum_j (x_j h_z - h_{y_j}) d_{x_j} + h_{x_j} d_{y_j}``.
    """
    n = h.n
    hz = h.partial(2 * n)
    comps = []
    vz = h
    for j in range(n):
        xj = PolyFunction.variable(n, 2 * j)
        hx, hy = h.partial(2 * j), h.partial(2 * j + 1)
        comps += [xj * hz - hy, hx]
        vz = vz - xj * hx
    return PolyVectorField(tuple(comps) + (vz,))


def hamiltonian_of(V):
    """Inverse of :func:`contact_hamiltonian_field`: ``h = V _| eta``."""
    return V.contract_eta()


def verify_infinitesimal(V, h, points):
    """Residuals of ``V _| eta = h`` and ``V _| d eta = -dh + R(h) eta`` at sample points.

    ``R = d/dz`` so ``R(h) = h_z``. Returns a dict with the two maxima,
    their maximum and a scale ``1 + max|h| + max|dh| (1 + max|p|)``.
    """
    p = np.asarray(points, dtype=np.complex128)
    n = V.n
    r1 = np.abs(V.contract_eta()(p) - h(p))
    dh = differential(h)
    hz = h.partial(2 * n)
    eta_c = eta_form(n)
    lhs = V.contract_deta()
    r2 = np.zeros(p.shape[:-1])
    for i in range(2 * n + 1):
        rhs_i = -dh[i](p) + hz(p) * eta_c[i](p)
        r2 = np.maximum(r2, np.abs(lhs[i](p) - rhs_i))
    grad = max(float(np.abs(d(p)).max()) for d in dh) if p.size else 0.0
    scale = 1.0 + float(np.abs(h(p)).max()) + grad * (1.0 + float(np.abs(p).max()))
    c, d = float(r1.max()), float(r2.max())
    return {"contraction": c, "differential": d, "residual": max(c, d), "scale": scale}


# -- flows -------------------------------------------------------------------------

@dataclass
class FlowReport:
    steps: int
    error_estimate: float


def _rk4(V, p, tau, steps):
    h = 1.0 / steps
    for _ in range(steps):
        k1 = tau * V(p)
        k2 = tau * V(p + 0.5 * h * k1)
        k3 = tau * V(p + 0.5 * h * k2)
        k4 = tau * V(p + h * k3)
        p = p + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(p)) or np.abs(p).max() > DIVERGENCE_NORM:
            raise Diverged("flow left every bounded region")
    return p


def flow_array(V, p0, tau, steps=64):
    """Vectorized RK4 flow of one or many points (last axis = coordinates)."""
    if steps < 16:
        raise InputError("flow needs at least 16 steps")
    p = np.array(p0, dtype=np.complex128)
    if tau == 0:
        return p
    return _rk4(V, p, complex(tau), int(steps))


def flow(V, p0, tau, steps=64, report=False):
    """Time-``tau`` flow of ``V`` from ``p0`` by classical RK4 along ``s -> s tau``.

    With ``report=True`` also returns a :class:`FlowReport` carrying the
    Richardson estimate ``|p(steps) - p(steps/2)| / 15``.
    """
    p = flow_array(V, np.asarray(p0), tau, steps)
    out = ContactPoint(p)
    if not report:
        return out
    coarse = flow_array(V, np.asarray(p0), tau, max(16, steps // 2))
    return out, FlowReport(steps, float(np.abs(p - coarse).max() / 15.0))


def _check_basis(p0, basis):
    basis = np.atleast_2d(np.asarray(basis, dtype=np.complex128))
    n = (p0.size - 1) // 2
    norms = np.linalg.norm(basis, axis=1)
    if basis.shape != (2 * n, 2 * n + 1) or np.any(norms == 0):
        raise BasisDegenerate(f"need {2 * n} nonzero vectors in C^{2 * n + 1}")
    if np.any(np.abs(eta(p0, basis)) > 1e-10 * norms):
        raise BasisDegenerate("basis vectors must lie in ker eta")
    sv = np.linalg.svd(basis, compute_uv=False)
    if sv[-1] <= 1e-10 * sv[0]:
        raise BasisDegenerate("basis vectors are linearly dependent")
    return basis


def verify_contactomorphism(V, p0, tau, basis=None, steps=64, fd_step=1e-5):
    """Check that the time-``tau`` flow maps ``ker eta`` at ``p0`` into ``ker eta``.

    The Jacobian is approximated by central differences on the initial point.
    Returns a dict with the residual ``max |eta(J v)| / |J v|`` and the image point.
    """
    p0 = np.asarray(p0, dtype=np.complex128)
    basis = _check_basis(p0, kernel_basis(p0) if basis is None else basis)
    starts = np.concatenate([p0 + fd_step * basis, p0 - fd_step * basis, p0[None]])
    ends = flow_array(V, starts, tau, steps)
    k = basis.shape[0]
    jac = (ends[:k] - ends[k:2 * k]) / (2 * fd_step)
    image = ends[-1]
    norms = np.linalg.norm(jac, axis=1)
    if np.any(norms == 0):
        raise BasisDegenerate("flow collapsed a kernel vector")
    res = np.abs(eta(image, jac)) / norms
    return {"residual": float(res.max()), "image": image, "transported": jac}
