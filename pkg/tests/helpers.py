import numpy as np

from legendrian.contact import Annulus, CurveJet, Disk
from legendrian.series import LaurentPoly


def random_poly(rng, lo, hi, scale=1.0):
    degs = np.arange(lo, hi + 1)
    return LaurentPoly.from_arrays(
        degs, scale * (rng.normal(size=degs.size) + 1j * rng.normal(size=degs.size)))


def random_bidisk_poly(rng, lo, hi):
    """Coefficients uniform in the unit disk."""
    degs = np.arange(lo, hi + 1)
    r = np.sqrt(rng.uniform(size=degs.size))
    return LaurentPoly.from_arrays(degs, r * np.exp(2j * np.pi * rng.uniform(size=degs.size)))


def random_disk_curve(rng, n, degree, bidisk=True):
    make = random_bidisk_poly if bidisk else random_poly
    comps = [make(rng, 0, degree) for _ in range(2 * n + 1)]
    return CurveJet.from_components(comps, Disk())


def random_annulus_curve(rng, n, lo=-3, hi=3, domain=None):
    comps = [random_bidisk_poly(rng, lo, hi) for _ in range(2 * n + 1)]
    return CurveJet.from_components(comps, domain or Annulus(0.5, 2.0))


def fd_derivative(fun, zeta, h=1e-3):
    """4th-order central difference of a holomorphic function along the real axis."""
    return (-fun(zeta + 2 * h) + 8 * fun(zeta + h) - 8 * fun(zeta - h) + fun(zeta - 2 * h)) / (12 * h)


def random_legendrian_center(rng, n, degree=4):
    """Random polynomial Legendrian disk (z from the antiderivative)."""
    from legendrian.contact import legendrize
    comps = [random_bidisk_poly(rng, 0, degree) for _ in range(2 * n)] + [LaurentPoly()]
    return legendrize(CurveJet.from_components(comps, Disk()))


def random_family(rng, n, J, K, lo=-3, hi=5, center_degree=4):
    from legendrian.rh import BoundaryFamily
    f = random_legendrian_center(rng, n, center_degree)
    a = [[random_bidisk_poly(rng, lo, hi) for _ in range(J)] for _ in range(n)]
    b = [[random_bidisk_poly(rng, lo, hi) for _ in range(K)] for _ in range(n)]
    return f, BoundaryFamily.from_center(f, a, b)
