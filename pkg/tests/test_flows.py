import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from legendrian.contact import ContactPoint
from legendrian.errors import BasisDegenerate, Diverged, InputError
from legendrian.flows import (
    PolyFunction,
    PolyVectorField,
    contact_hamiltonian_field,
    flow,
    flow_array,
    hamiltonian_of,
    lie_bracket,
    reeb_field,
    variable_names,
    verify_contactomorphism,
    verify_infinitesimal,
)


def random_cubic(rng, n, exact=True):
    """Random polynomial of degree <= 3 with Gaussian-rational or float coefficients."""
    syms = sp.symbols(variable_names(n))
    expr = 0
    for _ in range(8):
        mono = sp.Mul(*[syms[i] for i in rng.integers(0, 2 * n + 1, size=rng.integers(0, 4))])
        if exact:
            c = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 5))) \
                + sp.I * sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        else:
            c = complex(rng.normal(), rng.normal())
        expr += c * mono
    return PolyFunction.from_sympy(expr, n)


def sympy_field(h):
    """Independent oracle: build V_h directly with sympy differentiation."""
    n = h.n
    syms = sp.symbols(variable_names(n))
    H = h.to_sympy()
    z = syms[-1]
    comps, vz = [], H
    for j in range(n):
        x, y = syms[2 * j], syms[2 * j + 1]
        comps += [x * sp.diff(H, z) - sp.diff(H, y), sp.diff(H, x)]
        vz -= x * sp.diff(H, x)
    return [sp.expand(c) for c in comps + [vz]]


def random_points(rng, k, n):
    return rng.normal(size=(k, 2 * n + 1)) + 1j * rng.normal(size=(k, 2 * n + 1))


def test_polyfunction_parsing_and_algebra():
    h = PolyFunction.from_sympy("x1*y1 + 3*z**2 - 2", 1)
    assert h.degree == 2
    assert h.partial(2) == PolyFunction.from_sympy("6*z", 1)
    assert (h - h).is_zero()
    p = np.array([1 + 1j, 2, 0.5])
    assert h(p) == pytest.approx((1 + 1j) * 2 + 3 * 0.25 - 2)
    with pytest.raises(InputError):
        PolyFunction.from_sympy("w + x1", 1)
    with pytest.raises(InputError):
        PolyFunction.from_sympy("1/x1", 1)


def test_field_of_constant_is_reeb():
    assert contact_hamiltonian_field(PolyFunction.constant(2, 1)) == reeb_field(2)


def test_field_of_x1_is_d_y1():
    V = contact_hamiltonian_field(PolyFunction.variable(1, 0))
    assert V == PolyVectorField.coordinate(1, 1)
    assert all(c.is_zero() for c in V.lie_derivative_eta())


def test_field_of_z_is_conformal():
    h = PolyFunction.variable(1, 2)
    V = contact_hamiltonian_field(h)
    assert V == PolyVectorField.from_sympy(["x1", "0", "z"], 1)
    # L_V eta = R(h) eta = eta
    lie = V.lie_derivative_eta()
    assert lie == [PolyFunction(1), PolyFunction.variable(1, 0), PolyFunction.constant(1, 1)]


def test_field_matches_sympy_oracle(rng):
    for n in (1, 2):
        h = random_cubic(rng, n)
        V = contact_hamiltonian_field(h)
        ref = sympy_field(h)
        for comp, r in zip(V.components, ref):
            assert sp.expand(comp.to_sympy() - r) == 0


def test_round_trip_exact(rng):
    for _ in range(10):
        h = random_cubic(rng, int(rng.integers(1, 4)))
        assert hamiltonian_of(contact_hamiltonian_field(h)) == h


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 3))
def test_field_is_linear(seed, n):
    rng = np.random.default_rng(seed)
    h1, h2 = random_cubic(rng, n), random_cubic(rng, n)
    assert contact_hamiltonian_field(h1 + h2) == \
        contact_hamiltonian_field(h1) + contact_hamiltonian_field(h2)


def test_verify_infinitesimal(rng):
    for _ in range(20):
        n = int(rng.integers(1, 3))
        h = random_cubic(rng, n, exact=False)
        rep = verify_infinitesimal(contact_hamiltonian_field(h), h, random_points(rng, 50, n))
        assert rep["residual"] <= 1e-10 * rep["scale"]
    rep = verify_infinitesimal(reeb_field(1), PolyFunction.constant(1, 1), random_points(rng, 5, 1))
    assert rep["residual"] == 0


def test_verify_flags_wrong_field(rng):
    rep = verify_infinitesimal(PolyVectorField.coordinate(1, 0), PolyFunction.variable(1, 0),
                               random_points(rng, 10, 1))
    assert rep["contraction"] > 1e-3


def test_lie_bracket_of_kernel_fields():
    dx = PolyVectorField.coordinate(1, 0)
    w = PolyVectorField((PolyFunction(1), PolyFunction.constant(1, 1), -PolyFunction.variable(1, 0)))
    assert lie_bracket(dx, w) == PolyVectorField.coordinate(1, 2, -1)


def test_flow_of_reeb():
    p = flow(reeb_field(1), ContactPoint([1, 2, 3]), 2 + 1j)
    assert np.allclose(np.asarray(p), [1, 2, 5 + 1j], atol=1e-12)


def test_flow_linear_field_closed_form():
    V = contact_hamiltonian_field(PolyFunction.variable(1, 2))
    p0 = np.array([0.3 + 0.1j, -0.7, 1.2j])
    p, rep = flow(V, p0, 1.0, steps=256, report=True)
    ref = np.array([np.e * p0[0], p0[1], np.e * p0[2]])
    assert np.abs(np.asarray(p) - ref).max() < 1e-10
    assert rep.error_estimate < 1e-8


def test_flow_zero_time_is_identity():
    V = contact_hamiltonian_field(PolyFunction.from_sympy("x1*z + y1**2", 1))
    p0 = [0.1, 0.2, 0.3]
    assert np.array_equal(np.asarray(flow(V, p0, 0)), np.asarray(p0, complex))


def test_flow_semigroup(rng):
    V = contact_hamiltonian_field(PolyFunction.from_sympy("x1*y1 + z/2", 1))
    p0 = random_points(rng, 1, 1)[0] * 0.3
    direct = flow_array(V, p0, 0.5, 256)
    split = flow_array(V, flow_array(V, p0, 0.2, 256), 0.3, 256)
    assert np.abs(direct - split).max() < 1e-8
    lin = contact_hamiltonian_field(PolyFunction.variable(1, 2))
    assert np.abs(flow_array(lin, p0, 0.5, 256)
                  - flow_array(lin, flow_array(lin, p0, 0.2, 256), 0.3, 256)).max() < 1e-10


def test_flow_divergence():
    V = contact_hamiltonian_field(PolyFunction.from_sympy("z**3", 1))
    with pytest.raises(Diverged):
        flow(V, [0, 0, 10.0], 5.0, steps=16)
    with pytest.raises(InputError):
        flow(V, [0, 0, 1.0], 0.1, steps=8)


def test_reeb_flow_is_strict():
    rep = verify_contactomorphism(reeb_field(1), [0.4, -0.2, 1.0], 0.7)
    assert rep["residual"] <= 1e-7


def test_random_contact_flows_preserve_kernel(rng):
    for _ in range(5):
        h = random_cubic(rng, 1, exact=False) * 0.3
        rep = verify_contactomorphism(contact_hamiltonian_field(h), random_points(rng, 1, 1)[0] * 0.3, 0.3)
        assert rep["residual"] <= 1e-5


def test_non_contact_field_is_flagged():
    V = PolyVectorField((PolyFunction(1), PolyFunction(1), PolyFunction.variable(1, 0)))
    rep = verify_contactomorphism(V, [0.5, 0.2, 0.1], 0.3)
    assert rep["residual"] > 1e-2


def test_degenerate_basis():
    p0 = np.array([0.5, 0.2, 0.1])
    with pytest.raises(BasisDegenerate):
        verify_contactomorphism(reeb_field(1), p0, 0.1, basis=[[1, 0, 0], [2, 0, 0]])
    with pytest.raises(BasisDegenerate):
        verify_contactomorphism(reeb_field(1), p0, 0.1, basis=[[1, 0, 0], [0, 0, 1]])
