# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Numerics for W(x) = 2F1(2/3, 1; 4/3; x), the Dixonian pair sm/cm,
the derived sp/cp, the constants pi3 and Pi, and the level-4 pair p/q.

Values travel as CNum (double precision with a propagated error bound).
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np
from sympy import QQ, factorial

from proflow.src.errors import DomainError, PoleError, ProflowError
from proflow.src.exact_arith import poly_ring

OMEGA = complex(-0.5, math.sqrt(3) / 2)
SQRT3 = math.sqrt(3)

TAYLOR_TERMS = 60
TAYLOR_RADIUS = 0.9
POLE_RADIUS = 1e-8
MAX_HALVINGS = 2
SERIES_RADIUS = 0.9
SERIES_MAX_TERMS = 2000
EPS = 2.220446049250313e-16


# --- Numeric carrier ---

@dataclass(frozen=True)
class CNum:
    re: float
    im: float = 0.0
    err: float = 0.0
    inf: bool = False

    def __post_init__(self):
        if self.err < 0:
            raise DomainError(f"negative error bound {self.err}")

    @classmethod
    def of(cls, value, err=0.0):
        if isinstance(value, CNum):
            return value
        z = complex(value)
        if not cmath.isfinite(z):
            return cls.infinity()
        return cls(z.real, z.imag, float(err))

    @classmethod
    def infinity(cls):
        return cls(math.inf, 0.0, 0.0, True)

    @property
    def value(self):
        return complex(self.re, self.im)

    def __complex__(self):
        return self.value

    def __abs__(self):
        return math.inf if self.inf else abs(self.value)

    def __neg__(self):
        return self if self.inf else CNum(-self.re, -self.im, self.err)

    def __add__(self, other):
        other = CNum.of(other)
        if self.inf or other.inf:
            return CNum.infinity()
        return CNum.of(self.value + other.value, self.err + other.err)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-CNum.of(other))

    def __rsub__(self, other):
        return CNum.of(other) - self

    def __mul__(self, other):
        other = CNum.of(other)
        if self.inf or other.inf:
            return CNum.infinity()
        a, b = self.value, other.value
        return CNum.of(a * b, abs(a) * other.err + abs(b) * self.err + self.err * other.err)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CNum.of(other)
        if other.inf:
            if self.inf:
                raise DomainError("infinity / infinity is undefined")
            return CNum(0.0, 0.0, 0.0)
        if self.inf or other.value == 0:
            return CNum.infinity()
        a, b = self.value, other.value
        q = a / b
        return CNum.of(q, (self.err + abs(q) * other.err) / abs(b))

    def __rtruediv__(self, other):
        return CNum.of(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise DomainError("CNum powers are integral")
        out = CNum(1.0)
        base = self if n >= 0 else CNum(1.0) / self
        for _ in range(abs(n)):
            out = out * base
        return out

    def __str__(self):
        if self.inf:
            return "inf"
        return f"{self.re:.12g}{self.im:+.12g}i +/- {self.err:.3g}"


def as_complex(value):
    value = CNum.of(value)
    if value.inf:
        raise DomainError("finite argument required")
    return value.value


def cbrt_real(x):
    return float(np.cbrt(x))


def derivative(f, x, h=1e-5):
    """Central difference with one Richardson step; f maps complex -> complex."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


# --- Constants ---

@lru_cache(maxsize=None)
def _pi3_mp():
    """pi3^6 = 8 pi^6 (1 - sum 504 n^5 / ((-1)^n e^(sqrt3 pi n) - 1))."""
    with mpmath.workdps(40):
        q = mpmath.exp(mpmath.sqrt(3) * mpmath.pi)
        tail = mpmath.fsum(504 * mpmath.mpf(n)**5 / ((-1)**n * q**n - 1) for n in range(1, 40))
        return mpmath.root(8 * mpmath.pi**6 * (1 - tail), 6)


def pi3():
    return CNum(float(_pi3_mp()), 0.0, 4 * EPS * 5.3)


def Pi_const():
    return CNum(float(_pi3_mp()**3 / 27), 0.0, 4 * EPS * 5.6)


def pi3_gamma():
    with mpmath.workdps(40):
        return CNum(float(mpmath.sqrt(3) / (2 * mpmath.pi) * mpmath.gamma(mpmath.mpf(1) / 3)**3), 0.0, 4 * EPS * 5.3)


PI3 = float(_pi3_mp())
PI_CONST = PI3**3 / 27


# --- W(x) ---

def _w_series(x):
    term, total, k = 1.0 + 0j, 1.0 + 0j, 0
    while k < SERIES_MAX_TERMS:
        term *= x * (3 * k + 2) / (3 * k + 4)
        total += term
        k += 1
        if abs(term) < EPS * abs(total):
            break
    tail = abs(term) / max(1 - abs(x), EPS)
    return total, tail + EPS * k * abs(total)


def _w_complex(x):
    if x == 1:
        raise PoleError("W has a pole at x = 1")
    y = x / (x - 1)
    if min(abs(x), abs(y)) <= SERIES_RADIUS:
        if abs(x) <= abs(y):
            return _w_series(x)
        value, err = _w_series(y)
        return value / (1 - x), err / abs(1 - x)
    on_cut = x.imag == 0 and x.real > 1
    if abs(1 - x) <= SERIES_RADIUS and not on_cut:
        # connection between the solutions at 0 and at 1
        value, err = _w_series(1 - x)
        singular = PI3 / 3 * (x * (1 - x))**(-1 / 3)
        return singular - value, err + EPS * abs(singular)
    with mpmath.workdps(20):
        value = complex(mpmath.hyp2f1(mpmath.mpf(2) / 3, 1, mpmath.mpf(4) / 3, x))
    return value, 1e-14 * abs(value)


def hyper_W(x):
    z = as_complex(x)
    value, err = _w_complex(z)
    if z.imag == 0 and z.real < 1:
        value = complex(value.real, 0.0)
    return CNum.of(value, err)


def W_integral(x):
    """(1/3) int_0^1 dt / [(1-t)(1-xt)]^(2/3), for real x < 1."""
    x = float(as_complex(x).real)
    if x >= 1:
        raise DomainError("integral representation needs x < 1")
    with mpmath.workdps(25):
        value = mpmath.quad(lambda t: ((1 - t) * (1 - x * t))**(-mpmath.mpf(2) / 3), [0, 1]) / 3
    return CNum(float(value), 0.0, 1e-12)


def W_mpmath(x):
    with mpmath.workdps(20):
        return CNum.of(complex(mpmath.hyp2f1(mpmath.mpf(2) / 3, 1, mpmath.mpf(4) / 3, as_complex(x))))


def _is_real(z):
    return z.imag == 0


def kummer_solution(which, x):
    """Solutions W0, W1, W_inf of 3x(1-x)f' + (1-2x)f = 1."""
    x = CNum.of(x)
    if which == "inf" and x.inf:
        return CNum(0.0)
    z = as_complex(x)
    if which == "0":
        if _is_real(z) and z.real >= 1:
            raise DomainError(f"W0 is defined off [1, inf), got {z}")
        return hyper_W(z)
    if which == "1":
        if _is_real(z) and z.real <= 0:
            raise DomainError(f"W1 is defined off (-inf, 0], got {z}")
        return -hyper_W(1 - z)
    if which == "inf":
        if _is_real(z) and 0 <= z.real <= 1:
            raise DomainError(f"W_inf is defined off [0, 1], got {z}")
        return hyper_W(1 / z) / z
    raise DomainError(f"unknown Kummer branch '{which}'")


S3_ACTIONS = {
    "(0inf)": lambda f, x: f(1 / x) / x,
    "(01)": lambda f, x: -f(1 - x),
    "(1inf)": lambda f, x: f(x / (x - 1)) / (1 - x),
    "(01inf)": lambda f, x: -f((x - 1) / x) / x,
}


def s3_action(f, element, x):
    """Image of a solution f (complex -> complex) under an S3 element at x."""
    if element not in S3_ACTIONS:
        raise DomainError(f"unknown S3 element '{element}'")
    return S3_ACTIONS[element](f, as_complex(x))


def kummer_ode_residual(which, x, h=1e-5):
    z = as_complex(x)
    f = lambda t: kummer_solution(which, t).value
    return abs(3 * z * (1 - z) * derivative(f, z, h) + (1 - 2 * z) * f(z) - 1)


def W_range_check(samples=400):
    """x -> W^3(x) x (1-x) on (-inf, 1): returns (monotone, low end, high end)."""
    left = -np.logspace(12, -6, samples // 2)
    right = 1 - np.logspace(0, -12, samples // 2)[1:]
    xs = np.concatenate([left, [0.0], right])
    values = [hyper_W(float(x)).re**3 * x * (1 - x) for x in xs]
    monotone = all(b >= a for a, b in zip(values, values[1:]))
    return monotone, values[0], values[-1]


# --- Dixonian sm/cm ---

@lru_cache(maxsize=None)
def dixon_coefficients(n=TAYLOR_TERMS):
    """Exact Taylor coefficients of (sm, cm) from sm' = cm^2, cm' = -sm^2."""
    a, b = [QQ(0)], [QQ(1)]
    for k in range(n - 1):
        sa = sum((b[i] * b[k - i] for i in range(k + 1)), QQ(0))
        sb = sum((a[i] * a[k - i] for i in range(k + 1)), QQ(0))
        a.append(sa / (k + 1))
        b.append(-sb / (k + 1))
    return tuple(a), tuple(b)


PRINTED_SM = {1: 1, 4: -4, 7: 160, 10: -20800, 13: 647680}
PRINTED_CM = {0: 1, 3: -2, 6: 40, 9: -3680, 12: 880000}


def printed_series_check():
    a, b = dixon_coefficients()
    for table, coeffs in ((PRINTED_SM, a), (PRINTED_CM, b)):
        for k, c in table.items():
            if coeffs[k] != QQ(c, int(factorial(k))):
                return False
    return True


@lru_cache(maxsize=None)
def float_coefficients():
    a, b = dixon_coefficients()
    return [float(c) for c in a], [float(c) for c in b]


def horner(coeffs, u):
    out = 0j
    for c in reversed(coeffs):
        out = out * u + c
    return out


def _taylor(u):
    a, b = float_coefficients()
    return horner(a, u), horner(b, u)


@dataclass(frozen=True)
class LatticeCoord:
    """u = pi3*s + pi3*omega*t."""
    s: float
    t: float

    @property
    def value(self):
        return PI3 * (self.s + self.t * OMEGA)


def lattice_coord(u):
    """Coordinates of u reduced into the fundamental parallelogram."""
    u = as_complex(u)
    t = u.imag / (PI3 * SQRT3 / 2)
    s = u.real / PI3 + t / 2
    return LatticeCoord(s - math.floor(s), t - math.floor(t))


def lattice_reduce(u):
    """Representative of u mod the period lattice nearest to 0."""
    c = lattice_coord(u)
    base = c.value
    return min((base - PI3 * (a + b * OMEGA) for a in (0, 1) for b in (0, 1)), key=abs)


def q_point(a, b):
    return PI3 * a / 3 + PI3 * OMEGA * b / 3


POLES = (q_point(2, 0), q_point(1, 1), q_point(0, 2))
# (centre, k): near omega^k pi3/3 use sm(omega^k (pi3/3 - v)) = omega^k cm(v)
CENTRES = ((q_point(1, 0), 0), (q_point(0, 1), 1), (q_point(2, 2), 2))


def _duplicate(s, c):
    den = 1 - s**6
    return s * c**2 * (2 - s**3) / den, c**2 * (1 - 2 * s**3) / den


def _sm_cm_reduced(u, halvings=0):
    if abs(u) <= TAYLOR_RADIUS:
        return _taylor(u)
    for centre, k in CENTRES:
        d = lattice_reduce(u - centre)
        if abs(d) <= TAYLOR_RADIUS:
            s, c = _taylor(-d * OMEGA**(-k))
            return OMEGA**k * c, s
    if halvings >= MAX_HALVINGS:
        raise ProflowError(f"argument reduction failed at {u}")
    return _duplicate(*_sm_cm_reduced(u / 2, halvings + 1))


def sm_cm(u):
    u = CNum.of(u)
    if u.inf:
        return CNum.infinity(), CNum.infinity()
    r = lattice_reduce(u.value)
    if any(abs(lattice_reduce(r - pole)) < POLE_RADIUS for pole in POLES):
        return CNum.infinity(), CNum.infinity()
    s, c = _sm_cm_reduced(r)
    scale = 1 + abs(u.value)
    return CNum.of(s, 8 * EPS * scale * (1 + abs(s)) + u.err * abs(c)**2), \
        CNum.of(c, 8 * EPS * scale * (1 + abs(c)) + u.err * abs(s)**2)


def sm(u):
    return sm_cm(u)[0]


def cm(u):
    return sm_cm(u)[1]


def sm_over_u(u):
    """sm(u)/u, regular at 0."""
    u = as_complex(u)
    if abs(u) <= TAYLOR_RADIUS:
        a, _ = float_coefficients()
        return horner(a[1:], u)
    return sm_cm(u)[0].value / u


def sp_cp(u):
    s, c = sm_cm(u)
    if s.inf:
        return CNum.infinity(), CNum.infinity()
    return -(s * s) / c, (c * c) / s


# --- Addition laws ---

def _pair(u):
    s, c = sm_cm(u)
    if s.inf or c.inf:
        raise PoleError(f"addition law evaluated at a pole ({u})")
    return s.value, c.value


def _guard(den, what):
    if abs(den) < 1e-12:
        raise PoleError(f"{what}: degenerate addition denominator")
    return den


def addition_check_sm(u, v):
    s1, c1 = _pair(u)
    s2, c2 = _pair(v)
    den = _guard(1 - s1**3 * s2**3, "sm")
    formula = (s1 * c2**2 + s2 * c1**2 - s1**2 * s2**2 * c1 * c2) / den
    direct = sm(as_complex(u) + as_complex(v))
    return CNum.of(abs(direct.value - formula), direct.err)


def cm_addition_residual(u, v):
    s1, c1 = _pair(u)
    s2, c2 = _pair(v)
    den = _guard(1 - s1**3 * s2**3, "cm")
    formula = (c1 * c2 - s1 * s2 * (s1 * c2**2 + s2 * c1**2)) / den
    direct = cm(as_complex(u) + as_complex(v))
    return CNum.of(abs(direct.value - formula), direct.err)


def _sp_pair(u):
    S, C = sp_cp(u)
    if S.inf or C.inf:
        raise PoleError(f"sp/cp addition law evaluated at a pole ({u})")
    return S.value, C.value


def addition_check_sp(u, v):
    S1, C1 = _sp_pair(u)
    S2, C2 = _sp_pair(v)
    P = S1 * S2
    den = _guard((1 - P**2 * C1 * C2) * (P * C1 + P * C2 - 1), "sp")
    formula = (C1 + C2 - P * C1 * C2)**2 * P / den
    direct = sp_cp(as_complex(u) + as_complex(v))[0]
    return CNum.of(abs(direct.value - formula), direct.err)


def cp_addition_residual(u, v):
    S1, C1 = _sp_pair(u)
    S2, C2 = _sp_pair(v)
    P = S1 * S2
    den = _guard((1 - P**2 * C1 * C2) * (C1 + C2 - P * C1 * C2), "cp")
    formula = (1 - P * C1 - P * C2)**2 * C1 * C2 / den
    direct = sp_cp(as_complex(u) + as_complex(v))[1]
    return CNum.of(abs(direct.value - formula), direct.err)


def dixon_hyper_relation(x):
    """Residuals of cm(arg) = (1-x)^(-1/3) and sm(arg) = (-x)^(1/3)(1-x)^(-1/3)
    with arg = x^(1/3)(x-1)^(1/3)W(x), real cube roots, x < 1."""
    x = float(as_complex(x).real)
    if x >= 1:
        raise DomainError(f"relation holds for x < 1, got {x}")
    arg = cbrt_real(x) * cbrt_real(x - 1) * hyper_W(x).re
    s, c = sm_cm(arg)
    root = cbrt_real(1 - x)
    return abs(c.value - 1 / root), abs(s.value - cbrt_real(-x) / root)


# --- Level-4 pair p/q ---

U_RING, (U,) = poly_ring("u")


def pq_series(n):
    """Coefficients {exponent: Rational} of q = 1/u + ... and p = u^3 + ...

    Both satisfy p' = -p^2 + 3pq, q' = -q^2 + 3pq; only exponents 3 mod 4
    (and -1 for q) occur. p gets n terms, q gets n + 1.
    """
    if n < 1:
        raise DomainError(f"pq_series needs n >= 1, got {n}")
    p, q = {}, {-1: QQ(1)}
    for m in range(3, 4 * n, 4):
        pairs = [(i, m - 1 - i) for i in range(3, m - 3, 4)]
        pp = sum((p[i] * p[j] for i, j in pairs), QQ(0))
        pq = sum((p[i] * q[j] for i, j in pairs), QQ(0))
        qq = sum((q[i] * q[j] for i, j in pairs), QQ(0))
        rhs = -pp + 3 * pq
        if m == 3:
            if rhs:
                raise ProflowError("p/q recurrence inconsistent at u^3")
            p[m] = QQ(1)
        else:
            p[m] = rhs / (m - 3)
        q[m] = (-qq + 3 * pq + 3 * p[m]) / (m + 2)
    return q, p


def pq_relation_check(n):
    """p q (p - q)^2 = 1 through u^(4n-4)."""
    q, p = pq_series(n)
    p_shift = sum((U**(m - 3) * c for m, c in p.items()), U_RING.zero)
    uq = sum((U**(m + 1) * c for m, c in q.items()), U_RING.zero)
    up = sum((U**(m + 1) * c for m, c in p.items()), U_RING.zero)
    residual = p_shift * uq * (up - uq)**2 - 1
    return all(m[0] > 4 * n - 4 for m in residual.monoms())
