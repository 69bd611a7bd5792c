# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Grid data and SVG renderings of the vector-field and sign-region pictures."""

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from proflow.src.closed_forms import FlowKind, classical_flow_eval, curve_point, lambda_eval  # noqa: E402
from proflow.src.errors import DomainError  # noqa: E402
from proflow.src.expressions import vector_field  # noqa: E402
from proflow.src.special_functions import PI_CONST  # noqa: E402

SPAN = (-4.0, 4.0)
C0_RANGE = (-40.0, 0.98)
OVERLAY_SAMPLES = 400
VF_HEADER = ("x", "y", "u", "v")
SIGN_HEADER = ("x", "y", "sign")
OVERLAY_HEADER = ("curve", "x", "y")


def fmt_num(v):
    return f"{v:.12g}"


def _axis(n, lo, hi):
    if n < 1:
        raise DomainError(f"grid size must be >= 1, got {n}")
    if n == 1:
        return np.array([(lo + hi) / 2])
    return np.linspace(lo, hi, n)


def vector_field_grid(kind, n, span=SPAN, N=None):
    """n x n rows (x, y, u, v) of the unit-length vector field; zeros stay zero."""
    vf = vector_field(kind, N)
    rows = []
    for x in _axis(n, *span):
        for y in _axis(n, *span):
            w, r = (float(c) for c in vf.at(float(x), float(y)))
            norm = np.hypot(w, r)
            if norm > 0:
                w, r = w / norm, r / norm
            rows.append((float(x), float(y), w, r))
    return rows


def _first_coordinate(kind, N):
    if kind == "Lambda":
        return lambda x, y: lambda_eval(x, y)
    flow = FlowKind(kind, N)
    return lambda x, y: classical_flow_eval(flow, x, y).u


def sign_grid(kind, resolution, span=SPAN, N=None):
    """Rows (x, y, sign) of the first flow coordinate on a real grid; poles give 0."""
    first = _first_coordinate(kind, N)
    rows = []
    for x in _axis(resolution, *span):
        for y in _axis(resolution, *span):
            value = first(float(x), float(y))
            sign = 0 if value is None or value.inf else int(np.sign(value.value.real))
            rows.append((float(x), float(y), sign))
    return rows


def c0_overlay(samples=OVERLAY_SAMPLES, span=SPAN):
    """Samples (xW(x), W(x)) of the double-zero curve inside the window."""
    out = []
    for t in np.linspace(*C0_RANGE, samples):
        x, y = (complex(v).real for v in curve_point("C0", float(t)))
        if span[0] <= x <= span[1] and span[0] <= y <= span[1]:
            out.append(("C0", x, y))
    return out


def level_overlay(c=PI_CONST, samples=OVERLAY_SAMPLES, span=SPAN):
    """Real branches of xy(x - y) = c inside the window."""
    out = []
    for x in np.linspace(*span, samples):
        if x == 0:
            continue
        disc = x**4 - 4 * x * c
        if disc < 0:
            continue
        for sign in (1, -1):
            y = (x * x + sign * np.sqrt(disc)) / (2 * x)
            if span[0] <= y <= span[1]:
                out.append((f"E{sign:+d}", float(x), float(y)))
    return out


def write_csv(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt_num(v) if isinstance(v, float) else v for v in row])
    return path


def overlay_path(out):
    out = Path(out)
    return out.with_name(out.stem + ".overlay.csv")


def _save(fig, path):
    plt.rcParams["svg.hashsalt"] = "proflow"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return Path(path)


def render_vector_field(rows, path, orbit=None, title=""):
    arr = np.array(rows, dtype=float)
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.quiver(arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], angles="xy", pivot="mid", width=0.002)
    if orbit:
        for name in sorted({o[0] for o in orbit}):
            pts = np.array([(o[1], o[2]) for o in orbit if o[0] == name])
            ax.plot(pts[:, 0], pts[:, 1], ".", ms=1.5, color="#c53030")
    ax.set_aspect("equal")
    ax.set_title(title)
    return _save(fig, path)


def render_sign_grid(rows, resolution, path, overlays=(), span=SPAN, title=""):
    signs = np.array([r[2] for r in rows], dtype=float).reshape(resolution, resolution)
    fig, ax = plt.subplots(figsize=(6, 6))
    # rows are x-major; imshow wants y on the vertical axis
    ax.imshow(signs.T, origin="lower", extent=(*span, *span), cmap="gray", vmin=-2, vmax=1)
    for name in sorted({o[0] for o in overlays}):
        pts = np.array([(o[1], o[2]) for o in overlays if o[0] == name])
        ax.plot(pts[:, 0], pts[:, 1], ".", ms=1.5, label=name)
    if overlays:
        ax.legend(loc="upper left", fontsize=7)
    ax.set_title(title)
    return _save(fig, path)


def plot_vector_field(kind, n, out, svg=None, span=SPAN, N=None, orbit_level=None):
    rows = vector_field_grid(kind, n, span, N)
    written = [write_csv(out, VF_HEADER, rows)]
    if svg:
        orbit = level_overlay(orbit_level, span=span) if orbit_level is not None else None
        written.append(render_vector_field(rows, svg, orbit, title=f"{kind}: normalized vector field"))
    return written


def plot_sign_grid(kind, resolution, out, svg=None, span=SPAN, N=None):
    """Sign CSV, overlay CSV (C0 and xy(x-y) = Pi for Lambda) and optional SVG."""
    rows = sign_grid(kind, resolution, span, N)
    written = [write_csv(out, SIGN_HEADER, rows)]
    overlays = c0_overlay(span=span) + level_overlay(span=span) if kind == "Lambda" else []
    if overlays:
        written.append(write_csv(overlay_path(out), OVERLAY_HEADER, overlays))
    if svg:
        written.append(render_sign_grid(rows, resolution, svg, overlays, span, title=f"sign of {kind}"))
    return written
