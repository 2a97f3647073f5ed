"""Finite Laurent polynomials in one complex variable.

A :class:`LaurentPoly` stores its nonzero coefficients as two parallel,
read-only arrays sorted by degree (a sparse ordered map ``degree -> coeff``).
Negative degrees are first-class. Values are immutable and may be shared
freely between threads.
"""
from __future__ import annotations

import numbers

import numpy as np

from . import _backend
from .errors import NonzeroResidue, ZeroInPolarPart

TRIM = 1e-300
RES_TOL = 1e-12


def _freeze(a):
    a.flags.writeable = False
    return a


class LaurentPoly:
    """Sparse Laurent polynomial ``sum_k c_k u**k`` with complex128 coefficients.

    Parameters
    ----------
    coeffs : mapping or iterable of (degree, coefficient) pairs, optional
        Repeated degrees are summed. Coefficients whose real and imaginary
        parts are both below ``1e-300`` in magnitude are dropped; all other
        values, including numerical near-zeros, are kept.

    Examples
    --------
    >>> p = LaurentPoly({-1: 3, 0: 5, -2: 1})
    >>> p.residue()
    (3+0j)
    """

    __slots__ = ("_deg", "_coef")

    def __init__(self, coeffs=None):
        if coeffs is None:
            deg = np.empty(0, np.int64)
            coef = np.empty(0, np.complex128)
        else:
            items = coeffs.items() if hasattr(coeffs, "items") else coeffs
            acc = {}
            for k, c in items:
                k = int(k)
                acc[k] = acc.get(k, 0j) + complex(c)
            deg = np.array(sorted(acc), dtype=np.int64)
            coef = np.array([acc[k] for k in deg.tolist()], dtype=np.complex128)
        self._set(deg, coef)

    def _set(self, deg, coef):
        if coef.size and not np.all(np.isfinite(coef)):
            raise ValueError("Laurent coefficients must be finite")
        keep = (np.abs(coef.real) >= TRIM) | (np.abs(coef.imag) >= TRIM)
        if not keep.all():
            deg, coef = deg[keep], coef[keep]
        self._deg = _freeze(np.ascontiguousarray(deg, dtype=np.int64))
        self._coef = _freeze(np.ascontiguousarray(coef, dtype=np.complex128))

    @classmethod
    def from_arrays(cls, degrees, coeffs):
        """Build from parallel arrays; degrees need not be sorted or unique."""
        degrees = np.asarray(degrees, dtype=np.int64).ravel()
        coeffs = np.asarray(coeffs, dtype=np.complex128).ravel()
        if degrees.shape != coeffs.shape:
            raise ValueError("degrees and coeffs must have the same length")
        obj = cls.__new__(cls)
        if degrees.size and np.any(np.diff(degrees) <= 0):
            uniq, inv = np.unique(degrees, return_inverse=True)
            re = np.bincount(inv, weights=coeffs.real, minlength=uniq.size)
            im = np.bincount(inv, weights=coeffs.imag, minlength=uniq.size)
            degrees, coeffs = uniq, re + 1j * im
        obj._set(degrees, coeffs)
        return obj

    @classmethod
    def monomial(cls, degree, coeff=1.0):
        return cls.from_arrays([degree], [coeff])

    @classmethod
    def constant(cls, value):
        return cls.from_arrays([0], [value])

    @classmethod
    def from_dense(cls, coeffs, min_deg=0):
        """Coefficients ``coeffs[i]`` of ``u**(min_deg + i)``."""
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        return cls.from_arrays(np.arange(coeffs.size) + int(min_deg), coeffs)

    # -- inspection -----------------------------------------------------
    @property
    def degrees(self):
        return self._deg

    @property
    def coeffs(self):
        return self._coef

    @property
    def min_deg(self):
        return int(self._deg[0]) if self._deg.size else None

    @property
    def max_deg(self):
        return int(self._deg[-1]) if self._deg.size else None

    @property
    def nnz(self):
        return int(self._deg.size)

    def is_zero(self):
        return self._deg.size == 0

    def is_taylor(self):
        """True when there is no polar part (``min_deg >= 0`` or zero)."""
        return self._deg.size == 0 or self._deg[0] >= 0

    def pole_order(self):
        """Order of the pole at 0 (0 for Taylor polynomials)."""
        return max(0, -self.min_deg) if self._deg.size else 0

    def coeff(self, k):
        i = np.searchsorted(self._deg, k)
        if i < self._deg.size and self._deg[i] == k:
            return complex(self._coef[i])
        return 0j

    def items(self):
        return zip(self._deg.tolist(), self._coef.tolist())

    def to_dict(self):
        return dict(self.items())

    def l1_norm(self):
        return float(np.abs(self._coef).sum())

    def dense(self, lo=None, hi=None):
        """Dense coefficient vector over ``[lo, hi]`` (defaults to the support)."""
        if self.is_zero() and (lo is None or hi is None):
            return np.zeros(0, np.complex128)
        lo = self.min_deg if lo is None else lo
        hi = self.max_deg if hi is None else hi
        out = np.zeros(hi - lo + 1, np.complex128)
        m = (self._deg >= lo) & (self._deg <= hi)
        out[self._deg[m] - lo] = self._coef[m]
        return out

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        return LaurentPoly.from_arrays(
            np.concatenate([self._deg, other._deg]),
            np.concatenate([self._coef, other._coef]),
        )

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly.from_arrays(self._deg, -self._coef)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, numbers.Number):
            return LaurentPoly.from_arrays(self._deg, self._coef * complex(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, numbers.Number):
            return self * (1.0 / complex(other))
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, numbers.Integral) or k < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result, base = LaurentPoly.constant(1.0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k):
        """Multiply by ``u**k``."""
        return LaurentPoly.from_arrays(self._deg + int(k), self._coef)

    def conj_coeffs(self):
        return LaurentPoly.from_arrays(self._deg, np.conj(self._coef))

    def truncate(self, lo=None, hi=None):
        m = np.ones(self._deg.size, bool)
        if lo is not None:
            m &= self._deg >= lo
        if hi is not None:
            m &= self._deg <= hi
        return LaurentPoly.from_arrays(self._deg[m], self._coef[m])

    def differentiate(self):
        return differentiate(self)

    def antiderivative(self, tol=None):
        return antiderivative(self, tol=tol)

    def residue(self):
        return residue(self)

    def __call__(self, zeta):
        return evaluate(self, zeta)

    def evaluate(self, zeta):
        return evaluate(self, zeta)

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return np.array_equal(self._deg, other._deg) and np.array_equal(self._coef, other._coef)

    def __hash__(self):
        return hash((self._deg.tobytes(), self._coef.tobytes()))

    def allclose(self, other, atol=1e-13, rtol=0.0):
        """Coefficient-wise closeness (missing degrees count as zero)."""
        other = _coerce(other)
        diff = self - other
        scale = max(self.l1_norm(), other.l1_norm())
        return bool(np.all(np.abs(diff._coef) <= atol + rtol * scale))

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly({})"
        terms = ", ".join(f"{k}: {c!r}" for k, c in self.items())
        return f"LaurentPoly({{{terms}}})"

    def __reduce__(self):
        return (LaurentPoly.from_arrays, (np.array(self._deg), np.array(self._coef)))


def _coerce(x):
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, numbers.Number):
        return LaurentPoly.constant(x)
    return NotImplemented


ZERO = LaurentPoly()
ONE = LaurentPoly.constant(1.0)
U = LaurentPoly.monomial(1)


def add(p, q):
    """Coefficient-wise sum."""
    return p + q


def multiply(p, q):
    """Convolution of coefficients; support lands in ``[p.min+q.min, p.max+q.max]``."""
    if p.is_zero() or q.is_zero():
        return ZERO
    deg, coef = _backend.get().sparse_convolve(p._deg, p._coef, q._deg, q._coef)
    out = LaurentPoly.__new__(LaurentPoly)
    out._set(deg, coef)
    return out


def differentiate(p):
    """Term-wise ``d/du``; the constant term vanishes."""
    d = p._deg
    return LaurentPoly.from_arrays(d - 1, p._coef * d)


def residue_tolerance(p):
    return RES_TOL * (1.0 + p.l1_norm())


def antiderivative(p, tol=None):
    """Term-wise primitive with zero constant of integration.

    Raises :class:`NonzeroResidue` when the ``u**-1`` coefficient exceeds
    ``1e-12 * (1 + l1 norm)``; a coefficient below that tolerance is
    discarded.
    """
    tol = residue_tolerance(p) if tol is None else tol
    r = p.coeff(-1)
    if abs(r) > tol:
        raise NonzeroResidue(f"u^-1 coefficient {r:.3e} exceeds tolerance {tol:.1e}")
    m = p._deg != -1
    d = p._deg[m]
    return LaurentPoly.from_arrays(d + 1, p._coef[m] / (d + 1))


def evaluate(p, zeta):
    """Evaluate at a scalar or array of points (sparse Horner).

    Raises :class:`ZeroInPolarPart` if some point is 0 and ``p`` has a pole there.
    """
    scalar = np.isscalar(zeta)
    z = np.asarray(zeta, dtype=np.complex128)
    if p._deg.size and p._deg[0] < 0 and np.any(z == 0):
        raise ZeroInPolarPart("evaluating a polar part at 0")
    flat = np.ascontiguousarray(z.ravel())
    out = _backend.get().sparse_eval(p._deg, p._coef, flat).reshape(z.shape)
    return complex(out) if scalar else out


def residue(p):
    """Coefficient of ``u**-1``, i.e. the circle integral divided by ``2*pi*i``."""
    return p.coeff(-1)


def fit_on_circle(values, max_mode=None, rel_tol=0.0):
    """Laurent polynomial interpolating equispaced samples on the unit circle.

    ``values[k]`` is taken at ``exp(2 pi i k / P)``. Modes ``-max_mode..max_mode``
    (default: all below Nyquist) are kept; coefficients below
    ``rel_tol * max|coeff|`` are dropped.
    """
    values = np.asarray(values, dtype=np.complex128)
    P = values.size
    K = (P - 1) // 2 if max_mode is None else min(int(max_mode), (P - 1) // 2)
    c = np.fft.fft(values) / P
    degs = np.arange(-K, K + 1)
    coef = c[degs % P]
    if rel_tol > 0 and coef.size:
        coef = np.where(np.abs(coef) >= rel_tol * np.abs(coef).max(), coef, 0)
    return LaurentPoly.from_arrays(degs, coef)
