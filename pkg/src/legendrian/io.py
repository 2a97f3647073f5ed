"""File formats: curve and family JSON, sample and path CSV, SVG plots.

Numbers are written with 17 significant digits so that every float64 survives
a write/read cycle bit for bit. JSON is UTF-8; CSV uses ',' and LF.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os

import numpy as np

from .contact import Annulus, CurveJet, Disk
from .errors import InputError
from .paths import SampledPath
from .rh import BoundaryFamily
from .series import LaurentPoly

FORMAT_VERSION = "1"


def fmt(x):
    """Decimal text with 17 significant digits (round-trips any float64)."""
    x = float(x)
    if not math.isfinite(x):
        raise InputError("cannot serialize a non-finite number")
    return format(x, ".17g")


def component_names(n):
    names = []
    for j in range(1, n + 1):
        names += [f"x{j}", f"y{j}"]
    return names + ["z"]


# -- JSON with exact numbers -----------------------------------------------------------

class _Raw(str):
    """Marker for preformatted number text."""


def _dump(obj, indent=0):
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, _Raw):
        return str(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, dict) and len(v) <= 3 for v in obj):
            rows = [inner + _dump_inline(v) for v in obj]
            return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
        return "[" + ", ".join(_dump(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, float):
        return fmt(obj)
    return json.dumps(obj)


def _dump_inline(d):
    return "{" + ", ".join(f"{json.dumps(k)}: {_dump(v)}" for k, v in d.items()) + "}"


def dumps(obj):
    return _dump(obj) + "\n"


def _poly_json(p):
    return [{"deg": int(d), "re": _Raw(fmt(c.real)), "im": _Raw(fmt(c.imag))}
            for d, c in zip(p.degrees, p.coeffs)]


def _poly_parse(entries, where):
    if not isinstance(entries, list):
        raise InputError(f"{where}: coefficient list expected")
    seen, degs, coefs = set(), [], []
    for e in entries:
        if not isinstance(e, dict) or set(e) != {"deg", "re", "im"}:
            raise InputError(f"{where}: entries need exactly deg, re, im")
        d = e["deg"]
        if isinstance(d, bool) or not isinstance(d, int):
            raise InputError(f"{where}: degree {d!r} is not an integer")
        if d in seen:
            raise InputError(f"{where}: duplicate degree {d}")
        for part in ("re", "im"):
            if isinstance(e[part], bool) or not isinstance(e[part], (int, float)):
                raise InputError(f"{where}: {part} of degree {d} is not a number")
        seen.add(d)
        degs.append(d)
        coefs.append(complex(float(e["re"]), float(e["im"])))
    if not degs:
        return LaurentPoly()
    return LaurentPoly.from_arrays(np.array(degs, np.int64), np.array(coefs, np.complex128))


def _domain_json(domain):
    if isinstance(domain, Disk):
        return {"type": "disk", "radius": _Raw(fmt(domain.radius))}
    return {"type": "annulus", "inner": _Raw(fmt(domain.inner)), "outer": _Raw(fmt(domain.outer))}


def _domain_parse(d):
    if not isinstance(d, dict) or d.get("type") not in ("disk", "annulus"):
        raise InputError("domain must be {'type': 'disk' | 'annulus', ...}")
    try:
        if d["type"] == "disk":
            return Disk(float(d.get("radius", 1.0)))
        return Annulus(float(d["inner"]), float(d["outer"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad domain descriptor: {exc}") from exc


def curve_to_dict(f, metadata=None):
    comps = {name: _poly_json(p) for name, p in zip(component_names(f.n), f.components)}
    out = {
        "header": {"format_version": FORMAT_VERSION, "n": f.n, "domain": _domain_json(f.domain)},
        "components": comps,
    }
    if metadata:
        out["metadata"] = metadata
    return out


def curve_from_dict(data):
    if not isinstance(data, dict) or "header" not in data or "components" not in data:
        raise InputError("curve file needs 'header' and 'components'")
    head = data["header"]
    if not isinstance(head, dict) or head.get("format_version") != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {head.get('format_version') if isinstance(head, dict) else None!r}")
    n = head.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"header n must be a positive integer, got {n!r}")
    domain = _domain_parse(head.get("domain", {"type": "disk"}))
    comps = data["components"]
    names = component_names(n)
    if not isinstance(comps, dict):
        raise InputError("components must be an object keyed by component name")
    for name in comps:
        if name not in names:
            raise InputError(f"unknown component name {name!r}; expected {names}")
    missing = [name for name in names if name not in comps]
    if missing:
        raise InputError(f"missing components {missing}")
    polys = [_poly_parse(comps[name], name) for name in names]
    if isinstance(domain, Disk):
        for name, p in zip(names, polys):
            if not p.is_taylor():
                raise InputError(f"component {name!r} has negative degrees on a disk")
    return CurveJet.from_components(polys, domain)


def dumps_curve(f, metadata=None):
    return dumps(curve_to_dict(f, metadata))


def loads_curve(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"curve file is not valid JSON: {exc}") from exc
    return curve_from_dict(data)


def read_curve(path):
    with open(path, encoding="utf-8") as fh:
        return loads_curve(fh.read())


def write_curve(path, f, metadata=None):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_curve(f, metadata))


# -- families -----------------------------------------------------------------------

def family_to_dict(fam):
    """Higher v-coefficients of a family; the v^0 terms come from the center file."""
    return {
        "format_version": FORMAT_VERSION,
        "n": fam.n,
        "a": [[_poly_json(p) for p in ai[1:]] for ai in fam.a],
        "b": [[_poly_json(p) for p in bi[1:]] for bi in fam.b],
        "arc": None if fam.arc is None else [_Raw(fmt(fam.arc[0])), _Raw(fmt(fam.arc[1]))],
    }


def family_from_dict(data, center):
    if not isinstance(data, dict) or data.get("format_version") != FORMAT_VERSION:
        raise InputError("family file needs format_version '1'")
    if data.get("n") != center.n:
        raise InputError(f"family n={data.get('n')!r} does not match center n={center.n}")
    try:
        a = [[_poly_parse(p, f"a[{i}][{k}]") for k, p in enumerate(ai)] for i, ai in enumerate(data["a"])]
        b = [[_poly_parse(p, f"b[{i}][{k}]") for k, p in enumerate(bi)] for i, bi in enumerate(data["b"])]
    except (KeyError, TypeError) as exc:
        raise InputError(f"family file needs lists 'a' and 'b': {exc}") from exc
    arc = data.get("arc")
    if arc is not None:
        if not isinstance(arc, list) or len(arc) != 2:
            raise InputError("arc must be [theta0, theta1]")
        arc = (float(arc[0]), float(arc[1]))
    return BoundaryFamily.from_center(center, a, b, arc=arc)


def read_family(path, center):
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"family file is not valid JSON: {exc}") from exc
    return family_from_dict(data, center)


def write_family(path, fam):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(family_to_dict(fam)))


# -- CSV ------------------------------------------------------------------------------

def write_csv(path_or_file, header, rows):
    """Rows of numbers (or strings) with 17-digit floats."""
    own = isinstance(path_or_file, (str, os.PathLike))
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    finally:
        if own:
            fh.close()


def _read_rows(text):
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty CSV")
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        rows = rows[1:]
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise InputError(f"non-numeric CSV entry: {exc}") from exc


def _interleave(values):
    out = np.empty((values.shape[0], 2 * values.shape[1]))
    out[:, 0::2], out[:, 1::2] = values.real, values.imag
    return out


def _deinterleave(cols, where):
    if cols.shape[1] % 2:
        raise InputError(f"{where}: re/im columns must come in pairs")
    return cols[:, 0::2] + 1j * cols[:, 1::2]


def path_header(n):
    head = ["t"]
    for name in component_names(n):
        head += [f"{name}_re", f"{name}_im"]
    return head


def read_path_csv(path):
    """Path CSV: column t, then re/im interleaved for each coordinate."""
    with open(path, encoding="utf-8") as fh:
        data = _read_rows(fh.read())
    if data.ndim != 2 or data.shape[1] < 7 or (data.shape[1] - 1) % 4 != 2:
        raise InputError("path CSV needs t plus 2(2n+1) columns")
    return SampledPath(data[:, 0], _deinterleave(data[:, 1:], "path CSV"))


def write_path_csv(path, sp):
    rows = np.column_stack([sp.t, _interleave(sp.points)])
    write_csv(path, path_header(sp.n), rows)


def read_boundary_samples(path, dim=3):
    """Equispaced samples on the unit circle: re/im interleaved per coordinate."""
    with open(path, encoding="utf-8") as fh:
        data = _read_rows(fh.read())
    if data.shape[1] == 2 * dim + 1:
        data = data[:, 1:]
    if data.shape[1] != 2 * dim:
        raise InputError(f"boundary samples need {2 * dim} columns (optionally after theta)")
    return _deinterleave(data, "boundary CSV")


# -- plots ------------------------------------------------------------------------------

PROJECTIONS = ("front", "lagrange")


def projection_indices(proj, n):
    """Coordinate indices (0-based) of a 2D projection.

    ``front`` is ``(y_1, z)``, ``lagrange`` is ``(x_1, y_1)`` and ``pair i,j``
    selects coordinates ``i`` and ``j`` (1-based, in the order x1, y1, ..., z).
    """
    if proj == "front":
        return 1, 2 * n
    if proj == "lagrange":
        return 0, 1
    if proj.startswith("pair"):
        spec = proj[4:].strip().lstrip(":= ")
        try:
            i, j = (int(s) for s in spec.split(","))
        except ValueError as exc:
            raise InputError(f"bad pair selector {proj!r}; use 'pair i,j'") from exc
        if not (1 <= i <= 2 * n + 1 and 1 <= j <= 2 * n + 1) or i == j:
            raise InputError(f"pair {i},{j} outside 1..{2 * n + 1} or repeated")
        return i - 1, j - 1
    raise InputError(f"unknown projection {proj!r}; use front, lagrange or 'pair i,j'")


def projection_traces(f, proj, part="re", samples=256, radial=8):
    """Boundary circles and radial segments of ``f`` projected to the plane.

    Returns a list of ``(kind, params, uv)`` with ``uv`` of shape ``(m, 2)``.
    """
    if part not in ("re", "im"):
        raise InputError(f"part must be re or im, got {part!r}")
    if samples < 8:
        raise InputError("need at least 8 samples")
    i, j = projection_indices(proj, f.n)
    take = np.real if part == "re" else np.imag
    traces = []
    theta = 2 * np.pi * np.arange(samples) / samples
    radii = f.domain.boundary_radii
    for r in radii:
        vals = f(r * np.exp(1j * theta))
        traces.append(("boundary", theta, np.column_stack([take(vals[:, i]), take(vals[:, j])])))
    r0 = 0.0 if len(radii) == 1 else radii[0]
    t = np.linspace(r0, radii[-1], max(8, samples // 4))
    for k in range(radial):
        vals = f(t * np.exp(2j * np.pi * k / radial))
        traces.append(("radial", t, np.column_stack([take(vals[:, i]), take(vals[:, j])])))
    return traces


def svg_document(traces, size=480, title=None):
    """Standalone SVG with the viewBox fitted to the data plus a 5% margin."""
    pts = np.concatenate([uv for _, _, uv in traces]) if traces else np.zeros((1, 2))
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = hi - lo
    extent = float(span.max()) if span.max() > 0 else 1.0
    span = np.where(span > 0, span, extent)
    lo = lo - 0.5 * (span - (hi - lo))
    margin = 0.05 * span
    x0, y0 = lo - margin
    w, h = span + 2 * margin
    stroke = fmt(extent * 0.004)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{fmt(x0)} {fmt(-(y0 + h))} {fmt(w)} {fmt(h)}">',
    ]
    if title:
        out.append(f"  <title>{title}</title>")
    colors = {"boundary": "#1f4e99", "radial": "#b5651d"}
    for kind, _, uv in traces:
        coords = " ".join(f"{fmt(u)},{fmt(-v)}" for u, v in uv)
        if np.ptp(uv, axis=0).max() == 0:
            out.append(f'  <circle class="{kind}" cx="{fmt(uv[0, 0])}" cy="{fmt(-uv[0, 1])}" '
                       f'r="{stroke}" fill="{colors[kind]}"/>')
        else:
            out.append(f'  <polyline class="{kind}" fill="none" stroke="{colors[kind]}" '
                       f'stroke-width="{stroke}" points="{coords}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def traces_csv_rows(traces):
    for kind, params, uv in traces:
        for p, (u, v) in zip(params, uv):
            yield [p, u, v, kind]
