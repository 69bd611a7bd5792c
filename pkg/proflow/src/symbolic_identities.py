# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Exact identities in quotient rings of QQ(A, B, x, y).

A QuotientCheck keeps the left-hand side as an unreduced numerator and
denominator (sums are cross-multiplied, never gcd-reduced). The verdict
is the exact one; numeric spot checks at points of the variety are run
on top and a disagreement raises IdentityMismatchError.
"""

import cmath
from dataclasses import dataclass
from itertools import product

import numpy as np
from sympy import Matrix, QQ, eye, sqrt
from sympy.polys.fields import FracElement

from proflow.src.closed_forms import dixon_AB, dixon_AB_sp
from proflow.src.errors import DomainError, IdentityMismatchError
from proflow.src.exact_arith import (
    exact_divide,
    in_ideal,
    is_homogeneous,
    poly_ring,
    rational_field,
    substitute,
)
from proflow.src.expressions import R_parts, T_parts, XY, X, Y, vector_field

K4, (A_F, B_F, X_F, Y_F) = rational_field("A,B,x,y")
R4 = K4.ring
A, B, X4, Y4 = R4.gens
R3, (B3, X3, Y3) = poly_ring("B,x,y")
X_LINE, (T_LINE,) = poly_ring("x")

SPOT_CHECKS = 20
SPOT_TOLERANCE = 1e-7


@dataclass(frozen=True)
class QuotientCheck:
    name: str
    numerator: object
    denominator: object
    modulus: object
    verdict: bool
    certificate: object = None

    @property
    def lhs(self):
        K = self.numerator.ring.to_field()
        return K(self.numerator) / K(self.denominator)

    @property
    def certificate_terms(self):
        return 0 if self.certificate is None else len(self.certificate)

    def evaluate(self, point):
        return substitute(self.numerator, point) / substitute(self.denominator, point)


def _combine(terms):
    """Sum of (num, den) pairs as one unreduced (num, den)."""
    num, den = terms[0]
    for n, d in terms[1:]:
        num, den = num * d + n * den, den * d
    return num, den


def _as_pair(frac):
    return frac.numer, frac.denom


def quotient_check(name, terms, modulus, denominators=None):
    """Verdict of sum(terms) = 0 mod (modulus).

    ``denominators`` lists the factors whose product is the denominator;
    each must stay outside the ideal. Defaults to the term denominators.
    """
    if not modulus:
        raise DomainError(f"{name}: zero modulus")
    num, den = _combine(terms)
    factors = [d for _, d in terms] if denominators is None else denominators
    if any(in_ideal(d, modulus) for d in factors):
        return QuotientCheck(name, num, den, modulus, False)
    if not num:
        return QuotientCheck(name, num, den, modulus, True, num)
    certificate = exact_divide(num, modulus)
    return QuotientCheck(name, num, den, modulus, certificate is not None, certificate)


def spot_check(check, points, tol=SPOT_TOLERANCE):
    """Largest |lhs| over ``points``; raises when a true verdict fails numerically."""
    worst = 0.0
    for point in points:
        worst = max(worst, abs(check.evaluate(point)))
    if check.verdict and worst > tol:
        raise IdentityMismatchError(f"{check.name}: exact verdict true but |lhs| = {worst:.3g}")
    return worst


def _plane_points(rng, count, radius=0.7):
    points = []
    while len(points) < count:
        x, y = rng.uniform(-radius, radius, 2)
        if abs(x * y * (x - y)) > 1e-3:
            points.append((float(x), float(y)))
    return points


# --- Symmetry identities of R ---

def _symm_modulus():
    return A**3 * X4 * Y4 * (X4 - Y4) + B**3 - 1


def symm1_terms():
    return [
        R_parts(A, B, X4, Y4),
        R_parts(A, B, -Y4, X4 - Y4),
        R_parts(A, B, Y4 - X4, -X4),
    ]


def symm_identity_1(terms=None):
    """R(A,B;x,y) + R(A,B;-y,x-y) + R(A,B;y-x,-x) = 0 mod A^3xy(x-y) + B^3 - 1."""
    return quotient_check("symm1", symm1_terms() if terms is None else terms, _symm_modulus())


def symm2_terms(sign=1):
    second = _as_pair(sign * R_frac(A_F / B_F, 1 / B_F, -X_F, Y_F - X_F))
    return [R_parts(A, B, X4, Y4), second]


def R_frac(a, b, x, y):
    num, den = R_parts(a, b, x, y)
    return num / den


def symm_identity_2(terms=None):
    """R(A,B;x,y) + R(A/B,1/B;-x,y-x) = 0 mod A^3xy(x-y) + B^3 - 1."""
    return quotient_check("symm2", symm2_terms() if terms is None else terms, _symm_modulus())


def dixon_points(rng, count=SPOT_CHECKS):
    """Points of A^3 xy(x-y) + B^3 = 1 with A = sm(vs)/vs, B = cm(vs)."""
    points = []
    for x, y in _plane_points(rng, count):
        a, b = dixon_AB(x, y)
        points.append({"A": a, "B": b, "x": x, "y": y})
    return points


# --- The T avatar ---

def _quaq_modulus():
    return A * B * (A - B) - X4 * Y4 * (X4 - Y4)


def _quotient_rule_sum(num, den, weights):
    """sum_v (d/dv of num/den) * weights[v] over a common den^2."""
    total = num.ring.zero
    for v, weight in weights.items():
        total += (num.diff(v) * den - num * den.diff(v)) * weight
    return total, den**2


def quaq_lhs():
    num, den = T_parts(A, B, X4, Y4)
    weights = {
        A: A**2 - 2 * A * B,
        B: B**2 - 2 * A * B,
        X4: X4**2 - 2 * X4 * Y4,
        Y4: Y4**2 - 2 * X4 * Y4,
    }
    return _quotient_rule_sum(num, den, weights), den


def quaq_check():
    """(plain, reduced): the four-variable PDE of T fails for free variables
    and holds modulo AB(A - B) - xy(x - y)."""
    (num, den2), den = quaq_lhs()
    plain = QuotientCheck("quaq-plain", num, den2, R4.zero, not num)
    reduced = quotient_check("quaq", [(num, den2)], _quaq_modulus(), denominators=[den])
    return plain, reduced


def sp_points(rng, count=SPOT_CHECKS):
    """Points of AB(A - B) = xy(x - y) with A = sp(vs) vs, B = cp(vs) vs."""
    points = []
    for x, y in _plane_points(rng, count):
        a, b = dixon_AB_sp(x, y)
        points.append({"A": a, "B": b, "x": x, "y": y})
    return points


def T_quasi_flow_check():
    num, den = T_parts(A, B, X4, Y4)
    U = K4(num) / K4(den)
    return quasi_flow_pre_check(U, vector_field("Lambda"), X * Y * (X - Y), XY.one)


# --- A = 1 ---

def _tfun_modulus():
    return B3 * (1 - B3) - X3 * Y3 * (X3 - Y3)


def tfun_check(weight_B=None):
    """T_B(3B^2-3B) + T_x(x^2-2xy-x+2Bx) + T_y(y^2-2xy-y+2By) - (2B-1)T
    = 0 mod B(1-B) - xy(x-y), with T = T(1, B; x, y)."""
    num, den = T_parts(1, B3, X3, Y3)
    weights = {
        B3: 3 * B3**2 - 3 * B3 if weight_B is None else weight_B,
        X3: X3**2 - 2 * X3 * Y3 - X3 + 2 * B3 * X3,
        Y3: Y3**2 - 2 * X3 * Y3 - Y3 + 2 * B3 * Y3,
    }
    pde, den2 = _quotient_rule_sum(num, den, weights)
    lhs = pde - (2 * B3 - 1) * num * den
    return quotient_check("tfun", [(lhs, den2)], _tfun_modulus(), denominators=[den])


def _E_parts():
    """Numerators over the common denominator den^2 (1 - 2B) of
    N = E_x(x^2-2xy) + E_y(y^2-2xy) and D = E - xE_x - yE_y."""
    num, den = T_parts(1, B3, X3, Y3)
    g = 1 - 2 * B3
    t = {v: num.diff(v) * den - num * den.diff(v) for v in (B3, X3, Y3)}
    ex = t[B3] * (2 * X3 * Y3 - Y3**2) + t[X3] * g
    ey = t[B3] * (X3**2 - 2 * X3 * Y3) + t[Y3] * g
    N = ex * (X3**2 - 2 * X3 * Y3) + ey * (Y3**2 - 2 * X3 * Y3)
    D = num * den * g - X3 * ex - Y3 * ey
    return N, D, den, g


def sqrt_identity_check(sign=1):
    """(signed, squared) checks of N/D = 2B - 1 = sqrt(1 - 4xy(x - y))."""
    N, D, den, g = _E_parts()
    modulus = _tfun_modulus()
    radicand = 1 - 4 * X3 * Y3 * (X3 - Y3)
    signed = quotient_check("sqrt-signed", [(N - sign * (2 * B3 - 1) * D, den**2 * g)], modulus,
                            denominators=[den, g, D])
    squared = quotient_check("sqrt-squared", [(N**2 - radicand * D**2, den**4 * g**2)], modulus,
                             denominators=[den, g, D])
    return signed, squared


def radical_points(rng, count=SPOT_CHECKS):
    """(B, x, y) with B = 1/2 + sqrt(1 - 4xy(x - y))/2."""
    points = []
    for x, y in _plane_points(rng, count, radius=0.5):
        b = 0.5 + 0.5 * cmath.sqrt(1 - 4 * x * y * (x - y))
        points.append({"B": b, "x": x, "y": y})
    return points


# --- Orbit functions and quasi-flows ---

def orbit_ode_check(vf, N, f):
    """N f r(x,1) + f' [w(x,1) - x r(x,1)] = 0 for f in QQ[x]."""
    t = T_LINE
    w, r = (substitute(part, {"x": t, "y": X_LINE.one}) for part in (vf.w, vf.r))
    return not (f * r * N + f.diff(t) * (w - t * r))


def quasi_flow_pre_check(U, vf, P, Q):
    """(i) U is 1-homogeneous; (ii) its PDE holds modulo P(A,B)Q(x,y) - P(x,y)Q(A,B)."""
    if is_homogeneous(U) != 1:
        return False
    at_AB = lambda p: substitute(p, {"x": A, "y": B})
    at_xy = lambda p: substitute(p, {"x": X4, "y": Y4})
    modulus = at_AB(P) * at_xy(Q) - at_xy(P) * at_AB(Q)
    if not modulus:
        raise DomainError("quasi-flow modulus vanishes")
    weights = {A: at_AB(vf.w), B: at_AB(vf.r), X4: at_xy(vf.w), Y4: at_xy(vf.r)}
    num, den = _quotient_rule_sum(U.numer, U.denom, weights)
    return quotient_check("quasi-flow", [(num, den)], modulus, denominators=[U.denom]).verdict


def phi_n_quasi_data(N):
    """U = -A (y - B)^(N-1) / y^(N-1), its variant x (B - y)^(N-1) / B^(N-1),
    and V = yB / (B - y)."""
    U = -A_F * (Y_F - B_F)**(N - 1) / Y_F**(N - 1)
    U_hat = X_F * (B_F - Y_F)**(N - 1) / B_F**(N - 1)
    V = Y_F * B_F / (B_F - Y_F)
    return U, U_hat, V


def e_quasi_data():
    return (X_F**2 - Y_F**2) / (B_F - A_F) + (X_F + Y_F) / 2


def quasi_flow_boundary(U, x, y, N, z):
    """U(-z^N x y^(N-1), -1; xz, yz) / z, which tends to x."""
    point = {"A": -z**N * x * y**(N - 1), "B": -1.0, "x": x * z, "y": y * z}
    return substitute(U, point) / z


def _degree(p):
    return max(sum(m) for m in p.monoms())


def rational_flow_criterion(vf):
    """Level M when (y w_y - x r_y)/(y w_x - x r_x) = (ax+by)/(cx+dy) with a != d
    and ((a+d)^2 - 4bc)/(a-d)^2 = M^2, else None."""
    K, (x, y) = rational_field("x,y")
    w = substitute(vf.w, {"x": x, "y": y})
    r = substitute(vf.r, {"x": x, "y": y})
    num = y * w.diff(x) - x * r.diff(x)
    top = y * w.diff(y) - x * r.diff(y)
    if not num or not top:
        return None
    ratio = top / num
    p, q = ratio.numer, ratio.denom
    degrees = (_degree(p), _degree(q))
    if degrees == (0, 0):
        p, q = p * p.ring.gens[0], q * q.ring.gens[0]
    elif degrees != (1, 1):
        return None
    coeff = lambda f, m: f.coeff(f.ring.gens[0] if m == 0 else f.ring.gens[1])
    a, b = coeff(p, 0), coeff(p, 1)
    c, d = coeff(q, 0), coeff(q, 1)
    if a == d:
        return None
    value = ((a + d)**2 - 4 * b * c) / (a - d)**2
    root = sqrt(QQ.to_sympy(value)) if value >= 0 else None
    if root is None or not root.is_Integer or root <= 0:
        return None
    return int(root)


# --- Superflows ---

@dataclass(frozen=True)
class GroupRep:
    generators: tuple
    dimension: int

    def __post_init__(self):
        for g in self.generators:
            if g.shape != (self.dimension, self.dimension):
                raise DomainError(f"generator of shape {g.shape} in a {self.dimension}-dimensional representation")
            if g.det() == 0:
                raise DomainError("representation generators must be invertible")

    def word(self, indices):
        out = eye(self.dimension)
        for i in indices:
            out = out * self.generators[i]
        return out


def superflow_ring(N):
    names = ",".join(f"x{i}" for i in range(1, N + 1))
    return poly_ring(names)


def superflow_Q1(N):
    """Q_1 = x1^2 - 2/(N-1) x1 (x2 + ... + xN) and Q_i by swapping x1, xi."""
    if N < 2:
        raise DomainError(f"superflow needs N >= 2, got {N}")
    R, xs = superflow_ring(N)
    Q1 = xs[0]**2 - xs[0] * sum(xs[1:], R.zero) * QQ(2, N - 1)
    Q = [Q1]
    for i in range(1, N):
        Q.append(substitute(Q1, {"x1": xs[i], f"x{i + 1}": xs[0]}))
    return Q


def _apply(matrix, vector):
    n = matrix.shape[0]
    out = []
    for i in range(n):
        total = vector[0] * 0
        for j in range(n):
            entry = matrix[i, j]
            if entry != 0:
                total = total + vector[j] * QQ.from_sympy(entry)
        out.append(total)
    return out


def conjugate_field(Q, gamma):
    """gamma^-1 . Q . gamma as a list of components."""
    parent = Q[0].field if isinstance(Q[0], FracElement) else Q[0].ring
    gens = parent.gens
    names = [str(s) for s in parent.symbols]
    moved = _apply(gamma, list(gens))
    point = dict(zip(names, moved))
    return _apply(gamma.inv(), [substitute(q, point) for q in Q])


def superflow_invariance(Q, G):
    if len(Q) != G.dimension:
        raise DomainError(f"{len(Q)} components against a {G.dimension}-dimensional representation")
    return all(
        all(not (moved - q) for moved, q in zip(conjugate_field(Q, g), Q))
        for g in G.generators
    )


def sigma_rep():
    """<sigma, tau>, the six-element symmetry group of the plane flow."""
    return GroupRep((Matrix([[0, 1], [1, 0]]), Matrix([[1, -1], [0, -1]])), 2)


def permutation_rep(N):
    """S_{N+1} on the sum-zero hyperplane: transpositions (ij), i < j <= N, and kappa."""
    gens = []
    for i in range(N):
        for j in range(i + 1, N):
            m = eye(N)
            m[i, i] = m[j, j] = 0
            m[i, j] = m[j, i] = 1
            gens.append(m)
    kappa = eye(N)
    for i in range(N):
        kappa[i, 0] = -1
    gens.append(kappa)
    return GroupRep(tuple(gens), N)


M12 = Matrix([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
M13 = Matrix([[0, 0, 1], [0, -1, 0], [1, 0, 0]])
M14 = Matrix([[-1, 0, 0], [0, 0, 1], [0, 1, 0]])


def sigma4_prime_rep():
    """Rotations of the cube, generated by the images of (12), (13), (14)."""
    return GroupRep((M12, M13, M14), 3)


def a4_rep():
    """Klein four-group plus the image of (123) = (12)(13)."""
    return GroupRep((Matrix.diag(-1, -1, 1), Matrix.diag(-1, 1, -1), Matrix.diag(1, -1, -1), M12 * M13), 3)


def pelican_field():
    R, (x, y, z) = poly_ring("x,y,z")
    return [y * z, x * z, x * y]


def sigma4_prime_field():
    K, (x, y, z) = rational_field("x,y,z")
    s = x**2 + y**2 + z**2
    return [(y**3 * z - y * z**3) / s, (z**3 * x - z * x**3) / s, (x**3 * y - x * y**3) / s]


def sigma4_prime_field_check():
    """Invariance of the degree-(3,2) field under each generator of Sigma'_4."""
    Q = sigma4_prime_field()
    return [superflow_invariance(Q, GroupRep((g,), 3)) for g in sigma4_prime_rep().generators]


def random_words(G, rng, count=5, length=4):
    return [G.word(rng.integers(0, len(G.generators), length)) for _ in range(count)]


# --- Arithmetic classification ---

def bc_pairs_enumerate(bound=6):
    """Integer (B, C), B, C not in {0, 1}, B + C != 2, with (B+C-2)/(BC-1) integral."""
    if bound < 6:
        raise DomainError(f"scan bound must be >= 6, got {bound}")
    pairs = []
    for b, c in product(range(-bound, bound + 1), repeat=2):
        if b in (0, 1) or c in (0, 1) or b + c == 2 or b * c == 1:
            continue
        if (b + c - 2) % (b * c - 1) == 0:
            pairs.append((b, c))
    return pairs


def bc_pairs_confined(pairs, box=5):
    """Every pair of the scan lies in |B|, |C| <= box."""
    return all(max(abs(b), abs(c)) <= box for b, c in pairs)


# --- Battery ---

def run_identities(seed=0, verbose=False):
    """Every identity with its spot checks; returns (name, verdict, certificate terms, worst)."""
    rng = np.random.default_rng(seed)
    plain, quaq = quaq_check()
    signed, squared = sqrt_identity_check()
    battery = [
        (symm_identity_1(), dixon_points(rng)),
        (symm_identity_2(), dixon_points(rng)),
        (quaq, sp_points(rng)),
        (tfun_check(), radical_points(rng)),
        (signed, radical_points(rng)),
        (squared, radical_points(rng)),
    ]
    results = [(plain.name, plain.verdict, 0, None)]
    for check, points in battery:
        if verbose:
            print(f"[*] {check.name}: verdict {check.verdict}", flush=True)
        worst = spot_check(check, points)
        results.append((check.name, check.verdict, check.certificate_terms, worst))
    return results
