# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Graded power-series solutions of the flow PDE.

For a quadratic vector field (w, r) the flow is expanded as
u(xz, yz)/z = sum_i z^(i-1) L_i(x, y) with L_1 = x (or y) and

    L_{i+1} = (dL_i/dx * w + dL_i/dy * r) / i

All coefficients are exact rationals.
"""

from dataclasses import dataclass
from functools import lru_cache

from sympy import Matrix, QQ

from proflow.src.errors import DomainError, StabilizationError
from proflow.src.exact_arith import (
    guard_coefficients,
    numer_denom,
    poly_ring,
    rational_field,
    substitute,
    to_canonical_text,
    to_univariate,
)
from proflow.src.expressions import XY, X, Y, VectorField2, orbit_polynomial, vector_field

T_RING, (T,) = poly_ring("t")
T_FIELD, (T_F,) = rational_field("t")
Y_RING, (Y_UNI,) = poly_ring("y")
Z_RING, (Z,) = poly_ring("z")

GOLDEN_DEPTH = 24
AUDIT_STEP = 6


@dataclass(frozen=True)
class HomogSeries:
    layers: tuple

    @property
    def depth(self):
        return len(self.layers)

    def layer(self, i):
        return self.layers[i - 1]

    def truncated(self, n=None):
        n = self.depth if n is None else n
        return sum(self.layers[:n], XY.zero)


def flow_series(vf, first_coord=True, n=GOLDEN_DEPTH):
    if not isinstance(vf, VectorField2):
        raise DomainError("flow_series needs a polynomial quadratic vector field")
    if n < 1:
        raise DomainError(f"series depth must be >= 1, got {n}")
    layer = X if first_coord else Y
    layers = [layer]
    for i in range(1, n):
        layer = (layer.diff(X) * vf.w + layer.diff(Y) * vf.r) / i
        layers.append(guard_coefficients(layer))
    return HomogSeries(tuple(layers))


@lru_cache(maxsize=None)
def _specc_series(depth):
    return flow_series(vector_field("Lambda"), True, depth)


def lambda_series(depth=GOLDEN_DEPTH):
    """Series of the Dixonian flow truncated to ``depth`` layers."""
    full = _specc_series(max(depth, GOLDEN_DEPTH))
    return HomogSeries(full.layers[:depth])


# --- Table 1 ---

def wn_polynomial(n):
    return to_univariate(lambda_series(n).layer(n), T_RING)


def jmath(n):
    return 2 * ((n + 2) // 6)


def lowest_power(n):
    return min(m[0] for m in wn_polynomial(n).monoms())


def lowest_power_check(n):
    """The congruence w_n = 0 mod t^jmath(n) is exact: next power present."""
    return lowest_power(n) == jmath(n) + 1


def _symmetry_residuals(p, n):
    t = T_F
    at = lambda value: substitute(p, {"t": value})
    first = at(t) + (-t)**n * at(1 - 1 / t) + (t - 1)**n * at(1 / (1 - t))
    second = at(t) + (1 - t)**n * at(t / (t - 1))
    return first, second


def wn_symmetry_check(n):
    first, second = _symmetry_residuals(wn_polynomial(n), n)
    return not first and not second


def symmetric_family_dimension(n):
    """Dimension of the space of polynomials of degree <= n obeying both
    six-fold symmetry identities of w_n. Dimension 1 means w_n is the
    unique monic member."""
    clear = T_F**n * (T_F - 1)**n
    columns = []
    for k in range(n + 1):
        column = []
        for residual in _symmetry_residuals(T**k, n):
            cleared = residual * clear
            poly = cleared.numer.quo_ground(cleared.denom.LC)
            column.extend(QQ.to_sympy(poly.get((e,), QQ(0))) for e in range(3 * n + 1))
        columns.append(column)
    return n + 1 - Matrix(columns).T.rank()


def table1_rows(max_n=15):
    return [f"w{n}(t) = {to_canonical_text(wn_polynomial(n))}" for n in range(1, max_n + 1)]


# --- f_n(y) ---

def fn_required_depth(n):
    """Smallest depth D with jmath(D + 1) >= n.

    Layer i carries x^n only when n > jmath(i), so deeper layers add nothing.
    """
    depth = 1
    while jmath(depth + 1) < n:
        depth += 1
    return depth


def _fn_at_depth(n, depth):
    series = lambda_series(depth)
    out = Y_RING.zero
    for i in range(n, depth + 1):
        coeff = series.layer(i).get((n, i - n))
        if coeff:
            out += Y_UNI**(i - n) * coeff
    return out


def fn_polynomial(n, depth=None):
    if n < 1:
        raise DomainError(f"f_n needs n >= 1, got {n}")
    required = fn_required_depth(n)
    depth = required if depth is None else depth
    if depth < required:
        raise StabilizationError(f"f_{n} has not stabilized at depth {depth}", required)
    value = _fn_at_depth(n, depth)
    if _fn_at_depth(n, depth + AUDIT_STEP) != value:
        raise StabilizationError(f"f_{n} changed between depth {depth} and {depth + AUDIT_STEP}",
                                 depth + AUDIT_STEP)
    return value


def fn_rows(max_n=6):
    return [f"f{n}(y) = {to_canonical_text(fn_polynomial(n))}" for n in range(1, max_n + 1)]


# --- Diagonal ---

def diagonal_coeffs(n):
    """Taylor coefficients of lambda(z, -z)/z: layer i at (1, -1)."""
    series = lambda_series(n)
    return [substitute(series.layer(i), {"x": QQ(1), "y": QQ(-1)}) for i in range(1, n + 1)]


def skew_csv_rows(n=GOLDEN_DEPTH):
    rows = []
    for i, c in enumerate(diagonal_coeffs(n), start=1):
        num, den = numer_denom(c)
        rows.append((i, num, den))
    return rows


def cube_identity_holds(coeffs, n):
    """f(z)f(-z)[f(z)+f(-z)] = 2 through z^(n-3), with f = sum coeffs[k] z^k."""
    f = sum((Z**k * c for k, c in enumerate(coeffs)), Z_RING.zero)
    g = substitute(f, {"z": -Z})
    product = f * g * (f + g) - 2
    return all(m[0] > n - 3 for m in product.monoms())


def series_cube_identity(n):
    if n < 3:
        raise DomainError(f"cube identity needs n >= 3, got {n}")
    return cube_identity_holds(diagonal_coeffs(n), n)


# --- Series-level invariants ---

def _drop_degrees(p, above):
    return p.ring.from_dict({m: c for m, c in p.items() if sum(m) <= above})


def pde_series_residual(vf, n):
    """u_x (w - x) + u_y (r - y) + u through degree n; zero for a flow."""
    residuals = []
    for first in (True, False):
        u = flow_series(vf, first, n).truncated()
        residual = u.diff(X) * (vf.w - X) + u.diff(Y) * (vf.r - Y) + u
        residuals.append(_drop_degrees(residual, n))
    return tuple(residuals)


def pde_series_check(vf, n):
    return not any(pde_series_residual(vf, n))


def orbit_series_check(vf, W, n):
    """W(u, v) - W(x, y) vanishes through degree deg(W) + n - 1."""
    d = max(sum(m) for m in W.monoms())
    u = flow_series(vf, True, n).truncated()
    v = flow_series(vf, False, n).truncated()
    residual = substitute(W, {"x": u, "y": v}) - W
    return not _drop_degrees(residual, d + n - 1)


def period_series_check(n):
    """Both period identities of lambda, layer by layer."""
    series = lambda_series(n)
    for layer in series.layers:
        at = lambda a, b: substitute(layer, {"x": a, "y": b})
        if layer + at(-X, Y - X):
            return False
        if layer + at(-Y, X - Y) + at(Y - X, -X):
            return False
    return True


def _binomial(a, k):
    out = QQ(1)
    for j in range(k):
        out = out * (a - j) / (j + 1)
    return out


def phi_n_series_check(N, n):
    """Layers of ((N-1)xy, -y^2) against x(1+y)^(N-1) . y/(1+y)."""
    vf = vector_field("phi_N", N)
    first = flow_series(vf, True, n)
    second = flow_series(vf, False, n)
    for i in range(1, n + 1):
        if first.layer(i) != X * Y**(i - 1) * _binomial(N - 1, i - 1):
            return False
        if second.layer(i) != (-1)**(i - 1) * Y**i:
            return False
    return True


def standard_orbit_checks(n=10):
    """(field name, PDE ok, orbit ok) for the Dixonian and the level-4/6 fields."""
    results = []
    for kind in ("Lambda", "level4", "level6"):
        vf = vector_field(kind)
        results.append((kind, pde_series_check(vf, n), orbit_series_check(vf, orbit_polynomial(kind), n)))
    return results
