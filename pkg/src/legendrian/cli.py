"""Command-line front end.

Every subcommand prints a JSON report on stdout. Exit codes: 0 ok,
2 input error, 3 mathematical precondition violation, 4 non-convergence,
5 internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import io
from .contact import ContactPoint, legendrian_residual, legendrize
from .errors import InputError, LegendrianError
from .flat import FlatPlaneSpec, flat_embedding, taylor_truncate
from .flows import (
    PolyFunction,
    contact_hamiltonian_field,
    flow,
    verify_contactomorphism,
    verify_infinitesimal,
)
from .geometry import PushParams, boundary_push, embedding_check
from .paths import legendrian_path_approx
from .periods import domain_cycles, periods
from .rh import rh_approximate

TAU_RESIDUAL = 1e-10
TAU_PERIOD = 1e-10


class StrictCheckFailed(LegendrianError):
    """A --strict verification found a failing check."""

    exit_code = 3


# -- helpers ------------------------------------------------------------------------

def _plain(obj):
    """Convert reports to JSON-ready values (complex as {re, im}, non-finite as null)."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def _emit(report):
    sys.stdout.write(json.dumps(_plain(report), indent=2) + "\n")


def _complex_list(text, what):
    try:
        return [complex(v.strip().replace(" ", "")) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"{what}: expected comma-separated complex numbers, got {text!r}") from exc


def _curve_residual(f, samples):
    scale = 1.0 + f.l1_norm()
    return legendrian_residual(f, samples), scale


def _curve_target(path, dim):
    """Boundary target from a curve file or boundary-sample CSV."""
    if str(path).lower().endswith(".json"):
        return io.read_curve(path)
    return io.read_boundary_samples(path, dim)


# -- commands -----------------------------------------------------------------------

def cmd_legendrize(args):
    f = io.read_curve(args.input)
    before, scale = _curve_residual(f, args.samples)
    g = legendrize(f)
    after, _ = _curve_residual(g, args.samples)
    io.write_curve(args.output, g, {"provenance": "legendrize",
                                    "residual_after": float(after)})
    return {"command": "legendrize", "output": args.output,
            "residual_before": before, "residual_after": after, "scale": scale}


def cmd_rh(args):
    f = io.read_curve(args.center)
    fam = io.read_family(args.family, f)
    G, rho_p, N, rep = rh_approximate(f, fam, args.eps, args.rho0, N_max=args.max_n,
                                      samples=args.samples)
    io.write_curve(args.output, G, {"provenance": "rh", "eps": float(args.eps),
                                    "rho0": float(args.rho0), "N": N})
    out = {"command": "rh", "output": args.output, "N": N, "rho_prime": rho_p}
    out.update(rep.as_dict())
    return out


def cmd_flat(args):
    coeffs = _complex_list(args.plane, "--plane")
    if len(coeffs) % 2:
        raise InputError("--plane needs pairs a1,b1,...,an,bn")
    n = len(coeffs) // 2
    point = _complex_list(args.point, "--point") if args.point else [0j] * (2 * n + 1)
    if len(point) != 2 * n + 1:
        raise InputError(f"--point needs {2 * n + 1} coordinates for n={n}")
    spec = FlatPlaneSpec(coeffs[0::2], coeffs[1::2], ContactPoint(point))
    jet, bound = taylor_truncate(flat_embedding(spec), args.truncate, args.radius)
    io.write_curve(args.output, jet, {"provenance": "flat", "degree": args.truncate,
                                      "tail_bound": float(bound)})
    res, scale = _curve_residual(jet, 64)
    return {"command": "flat", "output": args.output, "n": n, "degree": args.truncate,
            "tail_bound": bound, "residual": res, "scale": scale}


def verify_report(f, samples=1024):
    """Legendrian residual, embedding margins and periods with a pass flag each."""
    res, scale = _curve_residual(f, 128)
    emb = embedding_check(f, M=samples)
    cycles = domain_cycles(f)
    pers = periods(f, cycles) if cycles else np.zeros(0, complex)
    per_rows = [{"radius": c.radius, "period": p, "ok": bool(abs(p) <= TAU_PERIOD * scale)}
                for c, p in zip(cycles, pers)]
    checks = {
        "legendrian": bool(res <= TAU_RESIDUAL * scale),
        "immersed": emb.immersed,
        "injective": emb.injective,
        "periods": all(r["ok"] for r in per_rows),
    }
    return {
        "residual": res, "scale": scale,
        "immersion_margin": emb.min_speed,
        "injectivity_margin": emb.min_gap,
        "samples": emb.samples,
        "periods": per_rows,
        "checks": checks,
        "ok": all(checks.values()),
    }


def cmd_verify(args):
    rep = verify_report(io.read_curve(args.input), args.samples)
    rep = {"command": "verify", **rep}
    if args.strict and not rep["ok"]:
        _emit(rep)
        failed = ", ".join(k for k, v in rep["checks"].items() if not v)
        raise StrictCheckFailed(f"verification failed: {failed}")
    return rep


def cmd_push(args):
    f = io.read_curve(args.curve)
    target = _curve_target(args.target, f.dim)
    params = PushParams(mu=args.mu, delta=args.delta, d=args.d, m=args.m, eps=args.arc_eps,
                        eps_rh=args.eps_rh, rho0=args.rho0, samples=args.samples,
                        grid_r=args.grid_r, grid_theta=args.grid_theta, seed=args.seed)
    g, rep = boundary_push(f, target, params)
    io.write_curve(args.output, g, {"provenance": "push", "mu": float(args.mu),
                                    "delta": float(args.delta), "seed": args.seed})
    return {"command": "push", "output": args.output, **rep.as_dict()}


def cmd_path(args):
    gamma = io.read_path_csv(args.input)
    lam, rep = legendrian_path_approx(gamma, args.eps, args.match_ends, seed=args.seed,
                                      report=True)
    io.write_path_csv(args.output, lam)
    return {"command": "path", "output": args.output, "eps": args.eps, "seed": args.seed,
            **rep.as_dict()}


def cmd_flow(args):
    point = np.asarray(_complex_list(args.point, "--point"))
    if point.size % 2 != 1 or point.size < 3:
        raise InputError("--point needs 2n+1 coordinates")
    n = (point.size - 1) // 2
    h = PolyFunction.from_sympy(args.h, n)
    V = contact_hamiltonian_field(h)
    end, frep = flow(V, point, args.tau, steps=args.steps, report=True)
    inf = verify_infinitesimal(V, h, point[None, :])
    con = verify_contactomorphism(V, point, args.tau, steps=args.steps)
    return {
        "command": "flow", "n": n, "h": args.h, "tau": args.tau, "steps": frep.steps,
        "field": [str(c.to_sympy()) for c in V.components],
        "point": point, "image": np.asarray(end), "error_estimate": frep.error_estimate,
        "infinitesimal_residual": inf["residual"], "infinitesimal_scale": inf["scale"],
        "contact_residual": con["residual"],
    }


def cmd_plot(args):
    f = io.read_curve(args.input)
    traces = io.projection_traces(f, args.proj, args.part, args.samples)
    i, j = io.projection_indices(args.proj, f.n)
    names = io.component_names(f.n)
    with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(io.svg_document(traces, title=f"{args.proj} ({args.part})"))
    csv_path = args.csv or os.path.splitext(args.output)[0] + ".csv"
    header = ["t_or_theta", f"{names[i]}_{args.part}", f"{names[j]}_{args.part}", "trace"]
    io.write_csv(csv_path, header, io.traces_csv_rows(traces))
    return {"command": "plot", "svg": args.output, "csv": csv_path,
            "projection": [names[i], names[j]], "part": args.part, "traces": len(traces)}


# -- parser ---------------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="legendrian",
                                description="Holomorphic Legendrian curves in C^{2n+1}.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("legendrize", help="replace z so the curve is Legendrian")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--samples", type=int, default=128)
    s.set_defaults(run=cmd_legendrize)

    s = sub.add_parser("rh", help="approximate Riemann-Hilbert solve")
    s.add_argument("center")
    s.add_argument("family")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--eps", type=float, default=0.05)
    s.add_argument("--rho0", type=float, default=0.8)
    s.add_argument("--max-n", type=int, default=4096)
    s.add_argument("--samples", type=int, default=256)
    s.set_defaults(run=cmd_rh)

    s = sub.add_parser("flat", help="Taylor jet of a flat Legendrian embedding")
    s.add_argument("--plane", required=True, help="a1,b1,...,an,bn")
    s.add_argument("--point", help="basepoint x1,y1,...,z (default 0)")
    s.add_argument("--truncate", type=int, default=20)
    s.add_argument("--radius", type=float, default=1.0)
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(run=cmd_flat)

    s = sub.add_parser("verify", help="residual, embedding margins and periods")
    s.add_argument("input")
    s.add_argument("--samples", type=int, default=1024)
    s.add_argument("--strict", action="store_true", help="exit 3 when a check fails")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("push", help="one boundary-push step")
    s.add_argument("curve")
    s.add_argument("target", help="curve JSON or boundary-sample CSV")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--mu", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--d", type=float, default=1e-3)
    s.add_argument("--m", type=int, default=8)
    s.add_argument("--arc-eps", type=float, default=0.25)
    s.add_argument("--eps-rh", type=float, default=0.005)
    s.add_argument("--rho0", type=float, default=0.5)
    s.add_argument("--samples", type=int, default=512)
    s.add_argument("--grid-r", type=int, default=64)
    s.add_argument("--grid-theta", type=int, default=256)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_push)

    s = sub.add_parser("path", help="Legendrian approximation of a sampled path")
    s.add_argument("input", help="path CSV: t, then re/im columns")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--match-ends", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_path)

    s = sub.add_parser("flow", help="flow of a contact Hamiltonian field")
    s.add_argument("--h", required=True, help="polynomial in x1, y1, ..., z")
    s.add_argument("--point", required=True)
    s.add_argument("--tau", type=complex, required=True)
    s.add_argument("--steps", type=int, default=64)
    s.set_defaults(run=cmd_flow)

    s = sub.add_parser("plot", help="SVG and CSV of a 2D projection")
    s.add_argument("input")
    s.add_argument("--proj", default="front", help="front, lagrange or 'pair i,j'")
    s.add_argument("--part", choices=("re", "im"), default="re")
    s.add_argument("--samples", type=int, default=256)
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--csv", help="CSV path (default: next to the SVG)")
    s.set_defaults(run=cmd_plot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        report = args.run(args)
    except LegendrianError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
