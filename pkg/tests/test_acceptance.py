"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Each test records a one-line verdict that is printed in the terminal summary.
"""
import time

import numpy as np
import pytest
import sympy as sp

from helpers import random_annulus_curve, random_disk_curve, random_family
from legendrian.cli import main as cli_main
from legendrian.contact import CurveJet, legendrian_residual, legendrize
from legendrian.flat import flat_embedding
from legendrian.flows import (
    PolyVectorField,
    PolyFunction,
    contact_hamiltonian_field,
    verify_contactomorphism,
    verify_infinitesimal,
)
from legendrian.geometry import PushParams, boundary_push, intrinsic_distance
from legendrian.io import dumps_curve, loads_curve, write_curve, write_path_csv
from legendrian.paths import SampledPath, legendrian_path_approx
from legendrian.periods import (
    Circle,
    build_dominating_spray,
    integrate_z,
    period,
    solve_period_vanishing,
)
from legendrian.rh import BoundaryFamily, defect, rh_approximate
from legendrian.series import LaurentPoly
from test_flat import random_points as disk_points, random_spec
from test_flows import random_cubic, random_points as space_points
from test_io import same_bits
from test_paths import random_polyline, reeb_segment

pytestmark = pytest.mark.acceptance
U = LaurentPoly.monomial(1)


def verdict(log, k, title, checks, elapsed, limit):
    """Record the line and return whether every check and the time limit passed."""
    checks = dict(checks)
    checks[f"time {elapsed:.2f}s < {limit:g}s"] = elapsed < limit
    ok = all(checks.values())
    failed = [name for name, good in checks.items() if not good]
    line = f"criterion {k:2d} {'PASS' if ok else 'FAIL'}  {title}"
    line += f"  [{elapsed:.2f}s]" + (f"  failed: {'; '.join(failed)}" if failed else "")
    log.append(line)
    print(line)
    return ok, failed


def test_criterion_01_legendrization_exactness(rng, acceptance_log):
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        f = random_disk_curve(rng, int(rng.integers(1, 4)), int(rng.integers(0, 11)))
        g = legendrize(f)
        worst = max(worst, legendrian_residual(g) / (1 + g.l1_norm()))
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 1, "legendrization exactness", {
        f"residual/scale {worst:.1e} <= 1e-12": worst <= 1e-12,
    }, elapsed, 1.0)
    assert ok, failed


def test_criterion_02_rh_closure_identity(rng, acceptance_log):
    u = np.exp(2j * np.pi * np.arange(16) / 16)[:, None]
    v = (np.sqrt(np.linspace(0, 1, 16)) * np.exp(2j * np.pi * 0.37 * np.arange(16)))[None, :]
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        J, K = (int(x) for x in rng.integers(1, 5, size=2))
        _, fam = random_family(rng, int(rng.integers(1, 4)), J, K, lo=-3, hi=5)
        worst = max(worst, float(fam.closure_residual(u, v).max()))
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 2, "RH closure identity", {
        f"identity {worst:.1e} <= 1e-10": worst <= 1e-10,
    }, elapsed, 2.0)
    assert ok, failed


def test_criterion_03_rh_defect_decay(acceptance_log):
    start = time.perf_counter()
    f = legendrize(CurveJet.from_components([U, U, 0]))
    fam = BoundaryFamily.from_center(f, [[1.0]], [[]])
    bounds = [defect(fam, N)[1] for N in (8, 16, 32, 64, 128)]
    G, rho_p, N, rep = rh_approximate(f, fam, 0.05, 0.8, N_max=4096)
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 3, "RH defect decay", {
        "bounds strictly decreasing": all(b < a for a, b in zip(bounds, bounds[1:])),
        f"bound(128) {bounds[-1]:.2e} < 1e-6": bounds[-1] < 1e-6,
        f"(i)-(iii) pass at N={N} <= 4096 (rho'={rho_p:.4f})": N <= 4096,
    }, elapsed, 10.0)
    assert ok, failed


def test_criterion_04_period_machinery(rng, acceptance_log):
    start = time.perf_counter()
    worst_p = worst_res = worst_agree = 0.0
    for _ in range(50):
        f = random_annulus_curve(rng, int(rng.integers(1, 4)))
        spray = build_dominating_spray(f, [Circle(1.0)], target_component=int(rng.integers(2 * f.n)))
        _, g = solve_period_vanishing(spray)
        worst_p = max(worst_p, abs(period(g, Circle(1.0))))
        h = integrate_z(g)
        worst_res = max(worst_res, legendrian_residual(h) / (1 + h.l1_norm()))
        r = float(rng.uniform(0.6, 1.8))
        worst_agree = max(worst_agree, abs(period(f, Circle(r)) - period(f, Circle(r).sample(2048))))
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 4, "period machinery", {
        f"|P| {worst_p:.1e} <= 1e-10": worst_p <= 1e-10,
        f"integrate_z residual/scale {worst_res:.1e} <= 1e-12": worst_res <= 1e-12,
        f"circle vs polyline {worst_agree:.1e} <= 1e-9": worst_agree <= 1e-9,
    }, elapsed, 2.0)
    assert ok, failed


def test_criterion_05_flat_embeddings(rng, acceptance_log):
    start = time.perf_counter()
    worst_eta = worst_base = worst_plane = 0.0
    injective = True
    for _ in range(100):
        spec = random_spec(rng, int(rng.integers(1, 4)))
        emb = flat_embedding(spec)
        zeta = disk_points(rng, 20, 3.0)
        p, d = emb(zeta), emb.derivative(zeta)
        scale = 1 + np.abs(p).max() * np.abs(d).max()
        worst_eta = max(worst_eta, emb.eta_residual(zeta).max() / scale)
        worst_base = max(worst_base, np.abs(emb(0.0) - np.asarray(spec.base)).max())
        worst_plane = max(worst_plane, np.abs(emb.plane_functional(p)).max() / (1 + np.abs(p).max()))
        z1, z2 = disk_points(rng, 1000, 3.0), disk_points(rng, 1000, 3.0)
        gap = np.linalg.norm(emb(z1) - emb(z2), axis=-1)
        injective &= bool(np.all(gap >= np.abs(z1 - z2) * (1 - 1e-12)))
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 5, "flat embeddings", {
        f"eta residual/scale {worst_eta:.1e} <= 1e-13": worst_eta <= 1e-13,
        f"|Psi(0) - p0| {worst_base:.1e} <= 1e-15": worst_base <= 1e-15,
        f"plane functional/scale {worst_plane:.1e} <= 1e-12": worst_plane <= 1e-12,
        "injectivity margin |Psi(a)-Psi(b)| >= |a-b|(1-1e-12)": injective,
    }, elapsed, 1.0)
    assert ok, failed


def test_criterion_06_contact_hamiltonians(rng, acceptance_log):
    start = time.perf_counter()
    exact = True
    worst_inf = worst_flow = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 3))
        h = random_cubic(rng, n)
        V = contact_hamiltonian_field(h)
        exact &= sp.expand(V.contract_eta().to_sympy() - h.to_sympy()) == 0
        hf = random_cubic(rng, n, exact=False)
        rep = verify_infinitesimal(contact_hamiltonian_field(hf), hf, space_points(rng, 20, n))
        worst_inf = max(worst_inf, rep["residual"] / rep["scale"])
    for _ in range(10):
        h = random_cubic(rng, 1, exact=False) * 0.3
        rep = verify_contactomorphism(contact_hamiltonian_field(h), space_points(rng, 1, 1)[0] * 0.3, 0.3)
        worst_flow = max(worst_flow, rep["residual"])
    bad = PolyVectorField((PolyFunction(1), PolyFunction(1), PolyFunction.variable(1, 0)))
    flagged = verify_contactomorphism(bad, [0.5, 0.2, 0.1], 0.3)["residual"] > 1e-2
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 6, "contact Hamiltonians", {
        "V_h contracted with eta == h symbolically": exact,
        f"infinitesimal residual/scale {worst_inf:.1e} <= 1e-10": worst_inf <= 1e-10,
        f"flow conformality {worst_flow:.1e} <= 1e-5": worst_flow <= 1e-5,
        "counterexample flagged": flagged,
    }, elapsed, 5.0)
    assert ok, failed


def path_passes(gamma, eps, seed=0):
    lam, rep = legendrian_path_approx(gamma, eps, seed=seed, report=True)
    ref = gamma.interpolate(lam.t)
    dev = float(np.linalg.norm(lam.points - ref, axis=1).max())
    res, scale = lam.legendrian_residual()
    ends = np.array_equal(lam.points[[0, -1]], gamma.points[[0, -1]])
    return dev <= eps and ends and float(np.abs(res).max()) <= 1e-8 * scale, dev, float(np.abs(res).max() / scale)


def test_criterion_07_path_approximation(acceptance_log):
    start = time.perf_counter()
    reeb_ok, reeb_dev, reeb_res = path_passes(reeb_segment(), 0.1)
    rng = np.random.default_rng(20240917)
    results = [path_passes(random_polyline(rng), 0.05) for _ in range(20)]
    elapsed = time.perf_counter() - start
    passed = sum(r[0] for r in results)
    ok, failed = verdict(acceptance_log, 7, "path approximation", {
        f"Reeb benchmark (dev {reeb_dev:.3f}, residual/scale {reeb_res:.1e}, exact ends)": reeb_ok,
        f"random polylines {passed}/20 pass": passed == 20,
    }, elapsed, 5.0)
    assert ok, failed


def test_criterion_08_boundary_push(acceptance_log):
    start = time.perf_counter()
    f = legendrize(CurveJet.from_components([0.5 * U, 0.5 * U, 0]))
    u = np.exp(2j * np.pi * np.arange(512) / 512)
    target = f(u) + np.array([0.05, 0, 0.05])
    mu, delta = 0.5, 0.12
    g, rep = boundary_push(f, target, PushParams(mu=mu, delta=delta, m=8))
    sup = float(np.linalg.norm(g(u) - target, axis=-1).max())
    bound = float(np.hypot(delta, mu))
    gain = intrinsic_distance(g, 64, 256) - intrinsic_distance(f, 64, 256)
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 8, "boundary push", {
        f"(I) sup {sup:.5f} < {bound:.5f}": sup < bound,
        f"gain {gain:.3f} >= 0.3 mu = {0.3 * mu:.3f}": gain >= 0.3 * mu,
    }, elapsed, 60.0)
    assert ok, failed


def test_criterion_09_distance_calibration(rng, acceptance_log):
    start = time.perf_counter()
    flat = intrinsic_distance(CurveJet.from_components([U, 0, 0]), 64, 256)
    f = random_disk_curve(rng, 1, 4)
    d1 = intrinsic_distance(f, 64, 256)
    d3 = intrinsic_distance(f.scaled(3.0), 64, 256)
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 9, "distance calibration", {
        f"flat disk {flat:.4f} in 1 +- 0.02": abs(flat - 1) <= 0.02,
        f"homogeneity |d(3f) - 3d(f)| = {abs(d3 - 3 * d1):.1e}": abs(d3 - 3 * d1) <= 1e-12 * d3,
    }, elapsed, 5.0)
    assert ok, failed


def test_criterion_10_cli_round_trip(rng, tmp_path, capsys, acceptance_log):
    start = time.perf_counter()
    exact = all(same_bits(loads_curve(dumps_curve(f)), f) for f in (
        random_disk_curve(rng, int(rng.integers(1, 4)), int(rng.integers(0, 11)), bidisk=False)
        for _ in range(100)))
    write_curve(tmp_path / "c.json", CurveJet.from_components([U, U, 0]))
    t = np.linspace(0, 1, 65)
    pts = np.zeros((65, 3), complex)
    pts[:, 0], pts[:, 2] = 0.1 * t, 0.05 * t
    write_path_csv(tmp_path / "p.csv", SampledPath(t, pts))
    runs = []
    for k in range(2):
        out = tmp_path / f"run{k}"
        out.mkdir()
        codes = [
            cli_main(["legendrize", str(tmp_path / "c.json"), "-o", str(out / "l.json")]),
            cli_main(["path", str(tmp_path / "p.csv"), "-o", str(out / "p.csv"),
                      "--eps", "0.05", "--seed", "0"]),
            cli_main(["plot", str(out / "l.json"), "-o", str(out / "l.svg")]),
        ]
        stdout = capsys.readouterr().out.replace(str(out), "OUT")
        files = {p.name: p.read_bytes() for p in sorted(out.iterdir())}
        runs.append((codes, stdout, files))
    elapsed = time.perf_counter() - start
    ok, failed = verdict(acceptance_log, 10, "CLI round trip", {
        "100 curves bit-exact": exact,
        "commands exit 0": runs[0][0] == [0, 0, 0],
        "deterministic outputs under --seed 0": runs[0] == runs[1],
    }, elapsed, 1.0)
    assert ok, failed
