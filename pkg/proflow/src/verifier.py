# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Numeric checks of the defining equations of a projective flow.

Every check takes a FlowEvaluator and returns a CNum residual (max-norm
of coordinate differences). An undefined intermediate raises
UndefinedEvaluationError naming the stage that failed.
"""

import cmath
from dataclasses import dataclass
from functools import partial

import numpy as np

from proflow.src.closed_forms import FlowKind, FlowValue, classical_flow_eval
from proflow.src.errors import DomainError, UndefinedEvaluationError
from proflow.src.exact_arith import substitute
from proflow.src.expressions import VectorField2, orbit_polynomial, vector_field
from proflow.src.special_functions import CNum, as_complex

# --- Tunables ---
H_Z = 1e-5
H_SPACE = 1e-5
BOUNDARY_Z = 1e-6
SINGULAR_MARGIN = 1e-3
SAMPLE_LIMIT = 10.0
MIN_Z = 0.25
MAX_RESAMPLES = 1000


@dataclass(frozen=True)
class FlowEvaluator:
    """A named flow (x, y) -> FlowValue with optional declared data."""
    name: str
    eval: object
    vf: VectorField2 = None
    orbit: object = None
    unramified: bool = True
    singular: object = None

    def __call__(self, x, y):
        return self.eval(x, y)


def _evaluate(flow, stage, x, y):
    value = flow(x, y)
    if not value.defined:
        raise UndefinedEvaluationError(flow.name, stage, (as_complex(x), as_complex(y)))
    return value.u.value, value.v.value


def _norm(a, b):
    return CNum.of(max(abs(a[0] - b[0]), abs(a[1] - b[1])))


# --- Defining equations ---

def prte_residual(flow, x, y, z):
    """(1 - z) phi(x, y) - phi(phi(xz, yz) (1 - z) / z)."""
    x, y, z = as_complex(x), as_complex(y), as_complex(z)
    if z == 0 or z == 1:
        raise DomainError(f"PrTE needs z outside {{0, 1}}, got {z}")
    u, v = _evaluate(flow, "phi(x)", x, y)
    U, V = _evaluate(flow, "phi(xz)", x * z, y * z)
    k = (1 - z) / z
    outer = _evaluate(flow, "phi(phi(xz)(1-z)/z)", U * k, V * k)
    return _norm(((1 - z) * u, (1 - z) * v), outer)


def boundary_residual(flow, x, y, z=BOUNDARY_Z):
    x, y = as_complex(x), as_complex(y)
    u, v = _evaluate(flow, "phi(xz)", x * z, y * z)
    return _norm((u / z, v / z), (x, y))


def vector_field_numeric(flow, x, y, h=H_Z):
    """d/dz phi(xz, yz)/z at z = 0, central differences with Richardson."""
    x, y = as_complex(x), as_complex(y)

    def scaled(z):
        u, v = _evaluate(flow, f"phi(xz) at z={z:g}", x * z, y * z)
        return np.array([u / z, v / z])

    d1 = (scaled(h) - scaled(-h)) / (2 * h)
    d2 = (scaled(h / 2) - scaled(-h / 2)) / h
    w, r = (4 * d2 - d1) / 3
    return CNum.of(w), CNum.of(r)


def _spatial_step(x, y):
    return H_SPACE * max(1.0, abs(x), abs(y))


def pde_residual(flow_first_coord, x, y, vf, h=None):
    """|u_x (w - x) + u_y (r - y) + u| for u the first coordinate."""
    x, y = as_complex(x), as_complex(y)
    h = _spatial_step(x, y) if h is None else h
    u = lambda a, b: as_complex(flow_first_coord(a, b))
    ux = (u(x + h, y) - u(x - h, y)) / (2 * h)
    uy = (u(x, y + h) - u(x, y - h)) / (2 * h)
    w, r = vf.at(x, y)
    return CNum.of(abs(ux * (w - x) + uy * (r - y) + u(x, y)))


def orbit_invariance(flow, W, x, y, z):
    x, y, z = as_complex(x), as_complex(y), as_complex(z)
    if z == 0:
        raise DomainError("orbit check needs z != 0")
    U, V = _evaluate(flow, "phi(xz)", x * z, y * z)
    moved = substitute(W, {"x": U / z, "y": V / z})
    return CNum.of(abs(moved - substitute(W, {"x": x, "y": y})))


def iteration_residual(flow, x, y, n):
    """n phi^n(x) - phi(n x)."""
    if n < 1:
        raise DomainError(f"iteration count must be >= 1, got {n}")
    point = (as_complex(x), as_complex(y))
    for step in range(n):
        point = _evaluate(flow, f"phi^{step + 1}(x)", *point)
    target = _evaluate(flow, "phi(nx)", n * as_complex(x), n * as_complex(y))
    return _norm((n * point[0], n * point[1]), target)


def inverse_residual(flow, x, y):
    """phi(-phi(-x, -y)) - (x, y)."""
    x, y = as_complex(x), as_complex(y)
    u, v = _evaluate(flow, "phi(-x)", -x, -y)
    back = _evaluate(flow, "phi(-phi(-x))", -u, -v)
    return _norm(back, (x, y))


def vector_field_agreement(flow, x, y):
    """Numeric vector field against the declared symbolic one."""
    if flow.vf is None:
        raise DomainError(f"{flow.name} declares no vector field")
    w, r = vector_field_numeric(flow, x, y)
    ws, rs = flow.vf.at(as_complex(x), as_complex(y))
    return _norm((w.value, r.value), (ws, rs))


# --- Catalogue ---

def _near_minus_one(x, y):
    return abs(y + 1)


def _tan_poles(x, y):
    c = cmath.cos(y)
    if abs(c) < SINGULAR_MARGIN:
        return 0.0
    return min(abs(c), abs(c - x * cmath.sin(y)))


def _t_poles(x, y):
    return abs(cmath.cos(x + y))


def _catalogue_entry(name, kind, N=None, unramified=True, singular=None):
    tag = kind.tag if isinstance(kind, FlowKind) else kind
    return FlowEvaluator(
        name=name,
        eval=partial(classical_flow_eval, FlowKind(tag, N)),
        vf=vector_field(tag, N),
        orbit=orbit_polynomial(tag, N),
        unramified=unramified,
        singular=singular,
    )


FLOWS = {
    "identity": _catalogue_entry("identity", "identity"),
    "phi_2": _catalogue_entry("phi_2", "phi_N", 2, singular=_near_minus_one),
    "phi_3": _catalogue_entry("phi_3", "phi_N", 3, singular=_near_minus_one),
    "exp": _catalogue_entry("exp", "exp"),
    "tan": _catalogue_entry("tan", "tan", singular=_tan_poles),
    "log": _catalogue_entry("log", "log", unramified=False, singular=_near_minus_one),
    "e": _catalogue_entry("e", "e"),
    "t": _catalogue_entry("t", "t", singular=_t_poles),
    "Lambda": _catalogue_entry("Lambda", "Lambda"),
}


def flow_named(name):
    if name in FLOWS:
        return FLOWS[name]
    kind = FlowKind.parse(name)
    return _catalogue_entry(str(kind), kind.tag, kind.N)


# --- Sampling ---

def _disk(rng, radius=1.0):
    r = radius * np.sqrt(rng.random())
    return complex(r * np.exp(2j * np.pi * rng.random()))


def _admissible(flow, x, y, z):
    if flow.singular is not None:
        for a, b in ((x, y), (x * z, y * z)):
            if flow.singular(a, b) < SINGULAR_MARGIN:
                return False
    try:
        U, V = _evaluate(flow, "sample", x * z, y * z)
        k = (1 - z) / z
        for point in ((x, y), (U * k, V * k)):
            u, v = _evaluate(flow, "sample", *point)
            if max(abs(u), abs(v)) > SAMPLE_LIMIT:
                return False
            if flow.singular is not None and flow.singular(*point) < SINGULAR_MARGIN:
                return False
    except UndefinedEvaluationError:
        return False
    return max(abs(U), abs(V)) <= SAMPLE_LIMIT


def sample_points(flow, rng, count, real=False):
    """``count`` admissible (x, y, z) in the bi-unit polydisk, |z|, |1 - z| >= MIN_Z.

    Admissible points keep phi(x), phi(xz) and phi(phi(xz)(1 - z)/z) within
    SAMPLE_LIMIT in modulus and away from the declared singular locus.
    """
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > MAX_RESAMPLES * max(count, 1):
            raise DomainError(f"{flow.name}: could not find {count} admissible sample points")
        if real:
            x, y, z = (complex(v) for v in rng.uniform(-1, 1, 3))
        else:
            x, y, z = _disk(rng), _disk(rng), _disk(rng)
        if abs(z) < MIN_Z or abs(1 - z) < MIN_Z:
            continue
        if _admissible(flow, x, y, z):
            points.append((x, y, z))
    return points
