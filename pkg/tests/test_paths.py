import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from legendrian.errors import DerivativeNotLegendrianAtEndpoint, InputError, ToleranceUnreachable
from legendrian.paths import (
    SampledPath,
    cumulative_integral,
    legendrian_path_approx,
    sample_derivative,
    window,
)


def polyline(vertices, samples=129):
    vertices = np.asarray(vertices, dtype=complex)
    t = np.linspace(0, 1, samples)
    s = np.linspace(0, 1, len(vertices))
    pts = np.stack([np.interp(t, s, v.real) + 1j * np.interp(t, s, v.imag) for v in vertices.T], axis=1)
    return SampledPath(t, pts)


def random_polyline(rng, radius=0.25, segments=4):
    r = radius * np.sqrt(rng.uniform(size=(segments + 1, 3)))
    return polyline(r * np.exp(2j * np.pi * rng.uniform(size=(segments + 1, 3))))


def reeb_segment():
    return polyline([[0, 0, 0], [0, 0, 1]], samples=65)


def quad_complex(f, a, b):
    kw = dict(epsabs=1e-14, epsrel=1e-13, limit=200)
    return quad(lambda s: f(np.array([s]))[0].real, a, b, **kw)[0] \
        + 1j * quad(lambda s: f(np.array([s]))[0].imag, a, b, **kw)[0]


def test_sampled_path_validation():
    t = np.linspace(0, 1, 9)
    with pytest.raises(InputError):
        SampledPath(t[:8] / t[7], np.zeros((8, 3)))
    with pytest.raises(InputError):
        SampledPath(t, np.zeros((9, 2)))
    with pytest.raises(InputError):
        SampledPath(t[::-1], np.zeros((9, 3)))
    bad = np.zeros((9, 3))
    bad[3, 1] = np.nan
    with pytest.raises(InputError):
        SampledPath(t, bad)


def test_uniform_derivative_is_fourth_order():
    errs = []
    for m in (64, 128):
        t = np.linspace(0, 1, m + 1)
        d = sample_derivative(t, np.exp(3j * t))
        errs.append(np.abs(d - 3j * np.exp(3j * t))[2:-2].max())
    assert errs[0] / errs[1] > 14


def test_piecewise_uniform_derivative_and_integral():
    t = np.concatenate([np.linspace(0, .3, 40, endpoint=False), np.linspace(.3, .5, 300, endpoint=False),
                        np.linspace(.5, 1, 101)])

    def f(x):
        return np.exp(2j * x) * np.cos(9 * x)

    deriv = np.exp(2j * t) * (2j * np.cos(9 * t) - 9 * np.sin(9 * t))
    assert np.abs(sample_derivative(t, f(t)) - deriv)[2:-2].max() < 1e-4
    ref = np.array([quad_complex(f, 0, x) for x in t[::20]])
    assert np.abs(cumulative_integral(t, f(t))[::20] - ref).max() < 1e-12


def test_window_is_flat_and_smooth():
    s = np.linspace(0, 1, 2001)
    phi, dphi = window(s)
    assert phi[0] == 0 and phi[-1] == 0 and phi[1000] == 1
    assert np.abs(np.gradient(phi, s) - dphi).max() < 1e-3 * np.abs(dphi).max()


def test_x_axis_segment_unchanged():
    gamma = polyline([[0, 0, 0], [1, 0, 0]])
    lam, rep = legendrian_path_approx(gamma, 0.1, report=True)
    assert rep.loops == 0
    assert np.abs(lam.points - gamma.interpolate(lam.t)).max() < 1e-15
    assert np.all(lam.points[:, 1:] == 0)


def test_legendrian_input_is_fixed():
    t = np.linspace(0, 1, 65)
    gamma = SampledPath(t, np.stack([t, t, -t ** 2 / 2], axis=1))
    lam, rep = legendrian_path_approx(gamma, 0.05, report=True)
    assert rep.loops == 0
    exact = np.stack([lam.t, lam.t, -lam.t ** 2 / 2], axis=1)
    assert np.abs(lam.points - exact).max() < 1e-10


def test_reeb_segment_benchmark():
    gamma = reeb_segment()
    lam, rep = legendrian_path_approx(gamma, 0.1, report=True)
    assert rep.loops > 0
    assert rep.deviation <= 0.1 and rep.xy_deviation <= 0.05
    assert np.array_equal(lam.points[0], gamma.points[0])
    assert np.array_equal(lam.points[-1], gamma.points[-1])
    assert rep.residual <= 1e-8 * rep.residual_scale
    assert rep.embedding.injective


def test_construction_identity():
    gamma = reeb_segment()
    lam, rep = legendrian_path_approx(gamma, 0.1, report=True)
    curve = rep.curve
    z = lam.points[:, -1]
    rng = np.random.default_rng(3)
    for k in rng.integers(0, len(lam) - 1, size=10):
        inc = quad_complex(curve.z_rate, lam.t[k], lam.t[k + 1])
        assert abs((z[k + 1] - z[k]) - inc) < 1e-12
    v = curve.xy(lam.t)
    assert np.abs(v - lam.points[:, :2])[1:-1].max() < 1e-15
    k = len(lam) // 3
    pieces = np.array([p.ta for p in curve.pieces] + [1.0])
    cuts = np.concatenate([pieces[pieces < lam.t[k]], [lam.t[k]]])
    total = sum(quad_complex(curve.z_rate, a, b) for a, b in zip(cuts[:-1], cuts[1:]))
    assert abs(z[k] - total) < 1e-12 * (1 + abs(z[k]))


def test_match_end_derivatives():
    t = np.linspace(0, 1, 65)
    x, y = np.cos(t), np.sin(2 * t)
    z = np.array([0] + [quad(lambda s: -np.cos(s) * 2 * np.cos(2 * s), 0, b)[0] for b in t[1:]])
    z = z + 0.05 * t  # push off Legendrian so corrections are needed
    d0 = np.array([0, 2, -1.0 * 2])
    d1 = np.array([-np.sin(1), 2 * np.cos(2), -np.cos(1) * 2 * np.cos(2)])
    gamma = SampledPath(t, np.stack([x, y, z], axis=1), d0, d1)
    lam, rep = legendrian_path_approx(gamma, 0.1, match_end_derivatives=True, report=True)
    assert np.abs(lam.start_derivative - d0).max() < 1e-6
    assert np.abs(lam.end_derivative - d1).max() < 1e-6
    assert rep.deviation <= 0.1
    fd = lam.derivative()
    assert np.abs(fd[0] - d0).max() < 1e-4


def test_non_legendrian_endpoint_derivative():
    gamma = reeb_segment()
    with pytest.raises(DerivativeNotLegendrianAtEndpoint):
        legendrian_path_approx(gamma, 0.1, match_end_derivatives=True)


def test_tolerance_unreachable():
    with pytest.raises(ToleranceUnreachable):
        legendrian_path_approx(reeb_segment(), 1e-3)


def test_deterministic_under_seed():
    gamma = reeb_segment()
    a = legendrian_path_approx(gamma, 0.1, seed=5)
    b = legendrian_path_approx(gamma, 0.1, seed=5)
    assert np.array_equal(a.points, b.points)


@settings(max_examples=6, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_random_polylines(seed):
    gamma = random_polyline(np.random.default_rng(seed), radius=0.15)
    eps = 0.1
    lam, rep = legendrian_path_approx(gamma, eps, report=True)
    ref = gamma.interpolate(lam.t)
    assert np.linalg.norm(lam.points[:, :2] - ref[:, :2], axis=1).max() <= eps / 2
    assert np.linalg.norm(lam.points - ref, axis=1).max() <= eps
    res, scale = lam.legendrian_residual()
    assert res.max() <= 1e-8 * scale
    assert np.array_equal(lam.points[[0, -1]], gamma.points[[0, -1]])
