# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Exact rationals, sparse multivariate polynomials and rational functions.

Thin layer over sympy's distributed ``ring``/``field`` types:

* Rational   -> elements of ``QQ`` (gmpy2 ``mpq`` when available)
* MultiPoly  -> ``PolyElement`` of ``ring(names, QQ, order)``
* RationalFn -> ``FracElement`` of ``field(names, QQ, order)``, kept reduced

Every computation fixes its variable universe up front by building its own
ring or field, so substitution and comparison are never ambiguous.
"""

from sympy import QQ
from sympy.polys.orderings import grlex, lex
from sympy.polys.rings import PolyElement, ring
from sympy.polys.fields import FracElement, field

from proflow.src.errors import DomainError, SeriesOverflowError

DEFAULT_ORDER = grlex
ORDERS = {"grlex": grlex, "lex": lex}

# Rational blow-up guard: 10**6 decimal digits
MAX_DENOMINATOR_BITS = 3321929


def poly_ring(names, order=DEFAULT_ORDER):
    """Return ``(R, gens)`` for QQ[names] under the given monomial order."""
    built = ring(names, QQ, order)
    return built[0], built[1:]


def rational_field(names, order=DEFAULT_ORDER):
    """Return ``(K, gens)`` for QQ(names) under the given monomial order."""
    built = field(names, QQ, order)
    return built[0], built[1:]


def rational(numerator, denominator=1):
    return QQ(numerator, denominator)


def numer_denom(c):
    """Split a Rational into Python ints (numerator, positive denominator)."""
    return int(QQ.numer(c)), int(QQ.denom(c))


def format_rational(c):
    n, d = numer_denom(c)
    return str(n) if d == 1 else f"{n}/{d}"


def _var_index(f, var):
    symbols = f.field.symbols if isinstance(f, FracElement) else f.ring.symbols
    names = [str(s) for s in symbols]
    if var not in names:
        raise DomainError(f"unknown variable '{var}' (have {', '.join(names)})")
    return names.index(var)


# --- Division and ideal membership ---

def exact_divide(f, g):
    """Return q with f = q*g when g divides f exactly, else None."""
    if not g:
        raise DomainError("division by the zero polynomial")
    q, r = f.div(g)
    return q if not r else None


def reduce_modulo(f, g, order=DEFAULT_ORDER):
    """Remainder of f on division by the single divisor g.

    A single polynomial is a Groebner basis of its own ideal, so the
    remainder vanishes exactly when f lies in (g), whatever the order.
    """
    if not g:
        raise DomainError("reduction modulo the zero polynomial")
    if isinstance(order, str):
        order = ORDERS[order]
    R = f.ring.clone(order=order)
    r = f.set_ring(R).rem(g.set_ring(R))
    return r.set_ring(f.ring)


def in_ideal(f, g, order=DEFAULT_ORDER):
    return not reduce_modulo(f, g, order)


# --- Calculus and structure ---

def partial_derivative(f, var):
    i = _var_index(f, var)
    if isinstance(f, FracElement):
        return f.diff(f.field.gens[i])
    return f.diff(f.ring.gens[i])


def _layer_degree(p, indices):
    degrees = {sum(m[i] for i in indices) for m in p.monoms()}
    return degrees.pop() if len(degrees) == 1 else None


def is_homogeneous(f, variables=None):
    """Degree d with f(zx, zy, ...) = z^d f(x, y, ...), or None.

    ``variables`` restricts the scaling to a subset of the generators.
    """
    if not f:
        raise DomainError("homogeneity of the zero function")
    if isinstance(f, FracElement):
        symbols, numer, denom = f.field.symbols, f.numer, f.denom
    else:
        symbols, numer, denom = f.ring.symbols, f, f.ring.one
    names = [str(s) for s in symbols]
    indices = range(len(names)) if variables is None else [names.index(v) for v in variables]
    dn = _layer_degree(numer, indices)
    dd = _layer_degree(denom, indices)
    if dn is None or dd is None:
        return None
    return dn - dd


# --- Substitution ---

def _is_inexact(value):
    return isinstance(value, (float, complex)) or type(value).__module__ == "numpy"


def _parent(value):
    if isinstance(value, FracElement):
        return value.field
    if isinstance(value, PolyElement):
        return value.ring
    return None


def _evaluate_poly(p, point, inexact):
    parents = [q for q in map(_parent, point) if q is not None]
    lift = parents[0].ground_new if parents else (float if inexact else (lambda c: c))
    total = lift(QQ(0))
    for monom, coeff in p.terms():
        term = lift(coeff)
        for value, e in zip(point, monom):
            if e:
                term = term * value**e
        total = total + term
    return total


def substitute(f, values):
    """Evaluate a MultiPoly or RationalFn at ``values`` (name -> value).

    Values may be ring/field elements, Rationals, ints or complex numbers;
    exact inputs give exact results. Unmapped generators stay as themselves.
    """
    if isinstance(f, FracElement):
        gens, symbols = f.field.gens, f.field.symbols
        numer, denom = f.numer, f.denom
    else:
        gens, symbols = f.ring.gens, f.ring.symbols
        numer, denom = f, None
    point = [values.get(str(s), g) for s, g in zip(symbols, gens)]
    inexact = any(_is_inexact(v) for v in point)
    num = _evaluate_poly(numer, point, inexact)
    if denom is None:
        return num
    den = _evaluate_poly(denom, point, inexact)
    if not den:
        raise ZeroDivisionError(f"denominator vanishes at {values}")
    if isinstance(den, PolyElement):
        K = den.ring.to_field()
        return K(num) / K(den)
    return num / den


def to_univariate(p, target):
    """Specialize a bivariate polynomial along (t, 1) into ``target``."""
    t = target.gens[0]
    out = target.zero
    for monom, coeff in p.terms():
        out += t**monom[0] * coeff
    return out


# --- Canonical text ---

def to_canonical_text(f, order=DEFAULT_ORDER):
    """Render as 'c*x^a*y^b + ...' sorted by the active monomial order."""
    if isinstance(f, FracElement):
        den = to_canonical_text(f.denom, order)
        num = to_canonical_text(f.numer, order)
        return num if den == "1" else f"({num})/({den})"
    if not f:
        return "0"
    names = [str(s) for s in f.ring.symbols]
    parts = []
    for monom, coeff in f.terms(order):
        factors = [format_rational(coeff)]
        for name, e in zip(names, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def guard_coefficients(p):
    """Raise when any denominator exceeds the rational blow-up guard."""
    for coeff in p.coeffs():
        if int(QQ.denom(coeff)).bit_length() > MAX_DENOMINATOR_BITS:
            raise SeriesOverflowError("coefficient denominator beyond 10^6 digits")
    return p
