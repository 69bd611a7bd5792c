# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

import cmath
from dataclasses import dataclass

import numpy as np

from proflow.src.errors import DomainError, IdentityMismatchError, PoleError
from proflow.src.expressions import R_core_parts, R_parts, T_parts
from proflow.src.series_engine import diagonal_coeffs
from proflow.src.special_functions import (
    CNum,
    PI3,
    sm_over_u,
    as_complex,
    derivative,
    hyper_W,
    q_point,
    sm_cm,
    sp_cp,
)

# Removable singularities of lambda on xy(x-y) = 0
REMOVABLE_RADIUS = 1e-20
BAND_RADIUS = 1e-10
BAND_TOLERANCE = 1e-8
BAND_SLOPE = 10.0
SINGULAR_EPS = 1e-12
NEAR_POLE = 1e3
SMALL_ARG = 1e-4

CLOSED_KINDS = ("identity", "phi_N", "exp", "tan", "log", "e", "t", "Lambda")


@dataclass(frozen=True)
class FlowKind:
    tag: str
    N: int = None

    def __post_init__(self):
        if self.tag not in CLOSED_KINDS:
            raise DomainError(f"no closed form for flow kind '{self.tag}'")
        if self.tag == "phi_N" and (self.N is None or self.N < 0):
            raise DomainError("phi_N needs a level N >= 0")

    @classmethod
    def parse(cls, text, N=None):
        """Accepts 'Lambda', 'exp', ..., 'phi_N' (with N) or 'phi_3'."""
        if text.startswith("phi_") and text[4:].isdigit():
            return cls("phi_N", int(text[4:]))
        return cls(text, N)

    def __str__(self):
        return f"phi_{self.N}" if self.tag == "phi_N" else self.tag


@dataclass(frozen=True)
class FlowValue:
    u: CNum
    v: CNum
    defined: bool = True

    @classmethod
    def undefined(cls):
        return cls(CNum.infinity(), CNum.infinity(), False)

    @classmethod
    def of(cls, u, v, err=0.0):
        u, v = CNum.of(u, err), CNum.of(v, err)
        return cls(u, v, not (u.inf or v.inf))


# --- Elementary helpers ---

def _tanc(s):
    """tan(s)/s, regular at 0."""
    if abs(s) < SMALL_ARG:
        return 1 + s**2 / 3 + 2 * s**4 / 15
    return cmath.tan(s) / s


def _logc(y):
    """log(1+y)/y, regular at 0."""
    if abs(y) < SMALL_ARG:
        return 1 - y / 2 + y**2 / 3 - y**3 / 4
    return cmath.log(1 + y) / y


def _u_t(x, y):
    s = x + y
    return (x + y * cmath.tan(s)) / (1 + (y - x) * _tanc(s))


def _classical(tag, N, x, y):
    if tag == "identity":
        return x, y
    if tag == "phi_N":
        if abs(y + 1) < SINGULAR_EPS:
            return None
        return x * (y + 1)**(N - 1), y / (y + 1)
    if tag == "exp":
        return x * cmath.exp(y), y
    if tag == "tan":
        den = 1 - x * _tanc(y)
        if abs(cmath.cos(y)) < SINGULAR_EPS or abs(den) < SINGULAR_EPS:
            return None
        return (x + y * cmath.tan(y)) / den, y
    if tag == "log":
        if abs(y + 1) < SINGULAR_EPS:
            return None
        den = (1 + y) * (1 + x * _logc(y))
        if abs(den) < SINGULAR_EPS:
            return None
        return x / den, y / (y + 1)
    if tag == "e":
        s = x + y
        g = cmath.exp(s)
        return ((x - y) * g + s) / 2, ((y - x) * g + s) / 2
    if tag == "t":
        s = x + y
        if abs(cmath.cos(s)) < SINGULAR_EPS:
            return None
        dens = (1 + (y - x) * _tanc(s), 1 + (x - y) * _tanc(s))
        if min(abs(d) for d in dens) < SINGULAR_EPS:
            return None
        return _u_t(x, y), _u_t(y, x)
    raise DomainError(f"unknown flow kind '{tag}'")


def classical_flow_eval(kind, x, y):
    if isinstance(kind, str):
        kind = FlowKind.parse(kind)
    if kind.tag == "Lambda":
        u, v = lambda_pair(x, y)
        return FlowValue(u, v, not (u.inf or v.inf))
    out = _classical(kind.tag, kind.N, as_complex(x), as_complex(y))
    if out is None:
        return FlowValue.undefined()
    return FlowValue.of(*out, err=1e-15)


def flow_inverse_eval(kind, x, y):
    """phi^-1(x, y) = -phi(-x, -y)."""
    fv = classical_flow_eval(kind, -as_complex(x), -as_complex(y))
    if not fv.defined:
        return fv
    return FlowValue(-fv.u, -fv.v, True)


# --- The exponential flow under the birational map l ---

def ell(x, y):
    x, y = as_complex(x), as_complex(y)
    if y == 0:
        raise DomainError("l(x, y) needs y != 0")
    return x * (x + y) / y, x + y


def ell_inverse(X, Y):
    X, Y = as_complex(X), as_complex(Y)
    if X + Y == 0:
        raise DomainError("l^-1(X, Y) needs X + Y != 0")
    return X * Y / (X + Y), Y**2 / (X + Y)


def ell_conjugation_check(x, y):
    x, y = as_complex(x), as_complex(y)
    if y == 0 or x + y == 0:
        raise DomainError(f"l-conjugation undefined at ({x}, {y})")
    s = x + y
    g = cmath.exp(s)
    den = x * g + y
    if den == 0:
        raise DomainError(f"conjugated flow has a pole at ({x}, {y})")
    X, Y = ell(x, y)
    u, v = ell_inverse(*_classical("exp", None, X, Y))
    return max(abs(u - x * s * g / den), abs(v - y * s / den))


def addition_law_residual(kind, a, b, N=None):
    """Residual of the addition law a catalogue flow encodes."""
    a, b = as_complex(a), as_complex(b)
    if kind == "exp":
        return abs(cmath.exp(a + b) - cmath.exp(a) * cmath.exp(b))
    if kind == "tan":
        ta, tb = cmath.tan(a), cmath.tan(b)
        return abs(cmath.tan(a + b) - (ta + tb) / (1 - ta * tb))
    if kind == "phi_N":
        f = lambda t: (t + 1)**(N - 1)
        return abs(f(a * b - 1) - f(a - 1) * f(b - 1))
    if kind == "log":
        f = lambda t: cmath.log(t + 1)
        return abs(f(a * b - 1) - f(a - 1) - f(b - 1))
    raise DomainError(f"no addition law recorded for '{kind}'")


# --- The Dixonian flow ---

def _cube_root(w):
    if w.imag == 0:
        return complex(np.cbrt(w.real))
    return w**(1 / 3)


def _limit_value(x, y):
    sizes = (abs(x), abs(y), abs(x - y))
    line = sizes.index(min(sizes))
    if line == 0:
        return 0j
    if line == 1:
        return x / (1 - x) if x != 1 else None
    return x / (1 + x) if x != -1 else None


def _lambda_closed(x, y, reflected=False):
    w = x * y * (x - y)
    vs = _cube_root(w)
    s, c = sm_cm(vs)
    if s.inf or abs(s) > NEAR_POLE:
        if reflected:
            return None
        # lambda(x, y) = -lambda(-x, y - x) moves the cube root off the poles
        other = _lambda_closed(-x, y - x, reflected=True)
        return None if other is None else -other
    A, B = sm_over_u(vs), c.value
    num, den = R_core_parts(A, B, x, y)
    if den == 0 or abs(num) > 1e14 * abs(den):
        return None
    return num / den


def _check_band(x, y, value):
    """Closed form against the limit line; the allowance grows with the distance to that line."""
    limit = _limit_value(x, y)
    if value is None and limit is None:
        return
    if value is not None and limit is not None:
        gap = min(abs(x), abs(y), abs(x - y))
        allowed = BAND_TOLERANCE * (1 + abs(limit)) + BAND_SLOPE * gap * (1 + abs(limit)) ** 2
        if abs(value - limit) <= allowed:
            return
    print(f"[!] lambda({x}, {y}): closed form {value} and limit {limit} disagree", flush=True)
    raise IdentityMismatchError(f"lambda({x}, {y}): closed form {value} disagrees with limit {limit}")


def lambda_eval(x, y):
    x, y = as_complex(x), as_complex(y)
    w = x * y * (x - y)
    if abs(w) < REMOVABLE_RADIUS:
        value = _limit_value(x, y)
        return CNum.infinity() if value is None else CNum.of(value, 1e-15)
    value = _lambda_closed(x, y)
    if abs(w) < BAND_RADIUS:
        _check_band(x, y, value)
    if value is None:
        return CNum.infinity()
    return CNum.of(value, 1e-13 * (1 + abs(value)))


def lambda_pair(x, y):
    return lambda_eval(x, y), lambda_eval(y, x)


def lambda_diagonal_series(z, n=24):
    """sum_{i<=n} c_i z^i with c_i the diagonal Taylor coefficients."""
    z = as_complex(z)
    coeffs = [float(c) for c in diagonal_coeffs(n)]
    return CNum.of(sum(c * z**(i + 1) for i, c in enumerate(coeffs)))


def dixon_AB(x, y):
    """(sm(vs)/vs, cm(vs)) with vs a cube root of xy(x - y)."""
    x, y = as_complex(x), as_complex(y)
    vs = _cube_root(x * y * (x - y))
    return sm_over_u(vs), sm_cm(vs)[1].value


def dixon_AB_sp(x, y):
    """(sp(vs) vs, cp(vs) vs), the arguments of T."""
    x, y = as_complex(x), as_complex(y)
    vs = _cube_root(x * y * (x - y))
    S, C = sp_cp(vs)
    return S.value * vs, C.value * vs


# --- Avatars ---

def _ratio(num, den):
    if den == 0:
        return CNum.infinity()
    return CNum.of(num / den, 1e-13 * (1 + abs(num / den)))


def R_eval(A, B, x, y):
    return _ratio(*R_parts(as_complex(A), as_complex(B), as_complex(x), as_complex(y)))


def R_swap_eval(A, B, x, y):
    """lambda(y, x) on E(c): R(A/B, 1/B; y, x)."""
    A, B = as_complex(A), as_complex(B)
    if B == 0:
        return CNum.infinity()
    return R_eval(A / B, 1 / B, y, x)


def T_eval(A, B, x, y):
    A = as_complex(A)
    if A == 0:
        raise PoleError("T has a pole at A = 0")
    return _ratio(*T_parts(A, as_complex(B), as_complex(x), as_complex(y)))


def E_branch(x, y):
    d = 1 - 4 * x * y * (x - y)
    if abs(d) < SINGULAR_EPS:
        raise DomainError(f"E: branch point at ({x}, {y})")
    if d.imag == 0 and d.real < 0:
        raise DomainError(f"E: ({x}, {y}) lies on the square-root cut")
    return 0.5 + 0.5 * cmath.sqrt(d)


def E_eval(x, y):
    x, y = as_complex(x), as_complex(y)
    B = E_branch(x, y)
    if y == 0:
        # T(1, 1; x, y) -> -x/(1 + x) as y -> 0
        return CNum.infinity() if x == -1 else CNum.of(-x / (1 + x), 1e-15)
    return _ratio(*T_parts(1, B, x, y))


def E_pde_residual(x, y, h=1e-5):
    """[E_x(x^2-2xy) + E_y(y^2-2xy)] / [E - xE_x - yE_y] - sqrt(1 - 4xy(x-y))."""
    x, y = as_complex(x), as_complex(y)
    f = lambda a, b: E_eval(a, b).value
    Ex = derivative(lambda t: f(t, y), x, h)
    Ey = derivative(lambda t: f(x, t), y, h)
    E = f(x, y)
    ratio = (Ex * (x**2 - 2 * x * y) + Ey * (y**2 - 2 * x * y)) / (E - x * Ex - y * Ey)
    return abs(ratio - cmath.sqrt(1 - 4 * x * y * (x - y)))


# --- Special curves ---

def curve_point(curve, x):
    """Points of C0 (xW, W), C_inf (W, xW) and C1 ((x-1)W, -W), x < 1."""
    W = hyper_W(x).value
    x = as_complex(x)
    if curve == "C0":
        return x * W, W
    if curve == "Cinf":
        return W, x * W
    if curve == "C1":
        return (x - 1) * W, -W
    raise DomainError(f"unknown curve '{curve}'")


def c0_vanishing(x):
    x = as_complex(x)
    if x.imag != 0 or x.real >= 1:
        raise DomainError(f"C0 is parametrized by real x < 1, got {x}")
    return abs(lambda_eval(*curve_point("C0", x)))


def point_on_level(x, c, sign=1):
    """y with x y (x - y) = c."""
    x, c = as_complex(x), as_complex(c)
    if x == 0:
        raise DomainError("no point with x = 0 on a nonzero level")
    return (x**2 + sign * cmath.sqrt(x**4 - 4 * x * c)) / (2 * x)


def lambda_special_values(x, sign=1):
    """Residuals of the restrictions of Lambda on two special level curves.

    With vs = pi3/3 (level Pi): lambda = -y and lambda(y, x) = x - y.
    With vs = q_{2,1} (a zero of sm): lambda = x.
    """
    x = as_complex(x)
    level = (PI3 / 3)**3
    y = point_on_level(x, level, sign)
    first = max(abs(lambda_eval(x, y).value + y), abs(lambda_eval(y, x).value - (x - y)))
    zero_level = q_point(2, 1)**3
    y0 = point_on_level(x, zero_level, sign)
    second = abs(lambda_eval(x, y0).value - x)
    return first, second
