# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""The cubic E(c): XY(X - Y) = cZ^3 as a group.

The neutral element is O = (1:1:0). The linear map
X = cr - q, Y = -cr - q, Z = 2p sends E(c) onto q^2 r = 4p^3 + c^2 r^3,
where the chord-tangent law is the textbook one; the explicit formulas
below are its transport.
"""

from dataclasses import dataclass

import numpy as np

from proflow.src.closed_forms import lambda_eval, point_on_level
from proflow.src.errors import DomainError, OffCurveError, PoleError
from proflow.src.special_functions import OMEGA, CNum, as_complex, sm_cm, sm_over_u

CURVE_TOLERANCE = 1e-8
SAME_TOLERANCE = 1e-9
UNDERFLOW = 1e-12
ZERO_AB = 1e-9


# --- Points ---

@dataclass(frozen=True)
class ProjPoint:
    X: CNum
    Y: CNum
    Z: CNum

    def __post_init__(self):
        if not any(abs(c.value) for c in self.coords_cnum()):
            raise DomainError("(0:0:0) is not a projective point")

    @classmethod
    def of(cls, X, Y, Z=1):
        return cls(CNum.of(X), CNum.of(Y), CNum.of(Z))

    def coords_cnum(self):
        return self.X, self.Y, self.Z

    @property
    def coords(self):
        return self.X.value, self.Y.value, self.Z.value

    @property
    def scale(self):
        return max(abs(c) for c in self.coords)

    def normalized(self):
        """Divide by the coordinate of largest magnitude."""
        coords = self.coords
        big = max(coords, key=abs)
        return tuple(c / big for c in coords)

    def is_finite(self, tol=UNDERFLOW):
        X, Y, Z = self.normalized()
        return abs(Z) > tol

    def affine(self):
        X, Y, Z = self.coords
        if abs(Z) <= UNDERFLOW * self.scale:
            raise PoleError(f"{self} is a point at infinity")
        return X / Z, Y / Z

    def to_json(self):
        return {name: [c.real, c.imag] for name, c in zip("XYZ", self.coords)}

    @classmethod
    def from_json(cls, data):
        return cls.of(*(complex(*data[name]) for name in "XYZ"))

    def __str__(self):
        return "(" + " : ".join(f"{c.real:.10g}{c.imag:+.10g}i" for c in self.normalized()) + ")"


def point_to_json(P):
    return P.to_json()


def projective_gap(P, Q):
    """Largest 2x2 minor of the normalized coordinates; 0 for equal points."""
    a, b = P.normalized(), Q.normalized()
    minors = (a[0] * b[1] - a[1] * b[0], a[0] * b[2] - a[2] * b[0], a[1] * b[2] - a[2] * b[1])
    return max(abs(m) for m in minors)


def same_point(P, Q, tol=SAME_TOLERANCE):
    return projective_gap(P, Q) <= tol


def point_distance(P, Q):
    """Max-norm distance of the affine images, for finite points."""
    (x1, y1), (x2, y2) = P.affine(), Q.affine()
    return max(abs(x1 - x2), abs(y1 - y2))


O = ProjPoint.of(1, 1, 0)
Q3 = ProjPoint.of(0, 1, 0)
TWO_Q3 = ProjPoint.of(1, 0, 0)


# --- Curves ---

@dataclass(frozen=True)
class CurveE:
    """E(c) with a fixed cube root of c; the principal root by default."""
    c: complex
    cbrt_c: complex = None
    tolerance: float = CURVE_TOLERANCE

    def __post_init__(self):
        c = as_complex(self.c)
        if c == 0:
            raise DomainError("E(0) is singular")
        root = c**(1 / 3) if self.cbrt_c is None else as_complex(self.cbrt_c)
        if abs(root**3 - c) > 1e-9 * abs(c):
            raise DomainError(f"{root} is not a cube root of {c}")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "cbrt_c", root)

    @property
    def half_root(self):
        """cbrt(c/2) under the fixed root; cbrt(4c) is twice this."""
        return self.cbrt_c / float(np.cbrt(2.0))

    def residual(self, P):
        X, Y, Z = P.normalized()
        return abs(X * Y * (X - Y) - self.c * Z**3) / max(1.0, abs(self.c))

    def on_curve(self, P):
        return self.residual(P) <= self.tolerance

    def require(self, P):
        if not self.on_curve(P):
            raise OffCurveError(f"{P} is not on E({self.c}) (residual {self.residual(P):.3g})")
        return P

    def point(self, x, y):
        return self.require(ProjPoint.of(x, y, 1))

    def __str__(self):
        return f"E({self.c})"


def random_point(E, rng):
    """Finite point of E with x drawn from the unit disk, by solving for y."""
    while True:
        x = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
        if abs(x) < 0.2:
            continue
        y = point_on_level(x, E.c, 1 if rng.random() < 0.5 else -1)
        P = ProjPoint.of(x, y, 1)
        if E.on_curve(P):
            return P


# --- Weierstrass form ---

def weierstrass_map(E, P):
    """(X:Y:Z) -> (p:q:r) on q^2 r = 4p^3 + c^2 r^3."""
    E.require(P)
    X, Y, Z = P.coords
    return ProjPoint.of(Z / 2, -(X + Y) / 2, (X - Y) / (2 * E.c))


def weierstrass_inverse(E, W):
    p, q, r = W.coords
    return ProjPoint.of(E.c * r - q, -E.c * r - q, 2 * p)


def weierstrass_residual(E, W):
    p, q, r = W.normalized()
    return abs(q**2 * r - 4 * p**3 - E.c**2 * r**3)


def _hat_affine(W):
    p, q, r = W.normalized()
    if abs(r) <= UNDERFLOW:
        return None
    return p / r, q / r


def _hat_add(E, W1, W2):
    """Chord-tangent addition on q^2 = 4p^3 + c^2; r = 0 is the neutral element."""
    a, b = _hat_affine(W1), _hat_affine(W2)
    if a is None:
        return W2
    if b is None:
        return W1
    (p1, q1), (p2, q2) = a, b
    scale = max(1.0, abs(p1), abs(q1), abs(p2), abs(q2))
    if abs(p1 - p2) <= UNDERFLOW * scale:
        if abs(q1 + q2) <= UNDERFLOW * scale:
            return ProjPoint.of(0, -1, 0)
        m = 6 * p1**2 / q1
    else:
        m = (q2 - q1) / (p2 - p1)
    p3 = m**2 / 4 - p1 - p2
    q3 = -(q1 + m * (p3 - p1))
    return ProjPoint.of(p3, q3, 1)


def _add_via_weierstrass(E, P1, P2):
    W = _hat_add(E, weierstrass_map(E, P1), weierstrass_map(E, P2))
    return weierstrass_inverse(E, W)


# --- Group law ---

def ec_neg(P):
    """-(X:Y:Z) = (-Y:-X:Z)."""
    X, Y, Z = P.coords
    return ProjPoint.of(-Y, -X, Z)


def ec_double(E, P):
    E.require(P)
    if not P.is_finite():
        return _add_via_weierstrass(E, P, P)
    x, y = P.affine()
    X1 = (2 * x - y)**3 * y
    Y1 = (2 * y - x)**3 * x
    Z1 = (x + y) * (2 * x - y) * (2 * y - x)
    return ProjPoint.of(X1, Y1, Z1)


def ec_add(E, P1, P2):
    """P1 + P2 with the cubic-reduced addition formula.

    Points at infinity and underflowing Z go through the Weierstrass form.
    """
    E.require(P1)
    E.require(P2)
    if same_point(P1, O):
        return P2
    if same_point(P2, O):
        return P1
    if same_point(P1, P2):
        return ec_double(E, P1)
    if not (P1.is_finite() and P2.is_finite()):
        return _add_via_weierstrass(E, P1, P2)
    (X1, Y1), (X2, Y2) = P1.affine(), P2.affine()
    X3 = (Y1 - Y2)**3 * X1 * X2
    Y3 = (X1 - X2)**3 * Y1 * Y2
    Z3 = (X1 - X2) * (Y1 - Y2) * (X1 * Y1 - X2 * Y2)
    if abs(Z3) <= UNDERFLOW * max(abs(X3), abs(Y3), abs(Z3)):
        return _add_via_weierstrass(E, P1, P2)
    return ProjPoint.of(X3, Y3, Z3)


def ec_add_raw(E, P1, P2):
    """The addition formula before reduction by the curve equation."""
    (X1, Y1), (X2, Y2) = E.require(P1).affine(), E.require(P2).affine()
    X3 = (-X1 * Y1 + X1**2 + X2 * Y2 - X2**2) * (Y1 - Y2)**2
    Y3 = (X1 * Y1 - Y1**2 - X2 * Y2 + Y2**2) * (X1 - X2)**2
    Z3 = (X1 - X2) * (Y1 - Y2) * (X1 - Y1 + Y2 - X2)
    return ProjPoint.of(X3, Y3, Z3)


def ec_sub(E, P1, P2):
    return ec_add(E, P1, ec_neg(P2))


def ec_mul(E, n, P):
    """n P by repeated addition; n >= 0."""
    if n < 0:
        return ec_mul(E, -n, ec_neg(P))
    out = O
    for _ in range(n):
        out = ec_add(E, out, P)
    return out


def point_order(E, P, limit=12):
    Q = P
    for m in range(1, limit + 1):
        if same_point(Q, O):
            return m
        Q = ec_add(E, Q, P)
    return None


# --- Torsion ---

def torsion_table(E):
    """(name, order, point) for O, Q2, Q3, 2Q3, Q6, 5Q6 under the fixed root."""
    a = E.half_root
    return [
        ("O", 1, O),
        ("Q2", 2, ProjPoint.of(-a, a, 1)),
        ("Q3", 3, Q3),
        ("2Q3", 3, TWO_Q3),
        ("Q6", 6, ProjPoint.of(-a, -2 * a, 1)),
        ("5Q6", 6, ProjPoint.of(2 * a, a, 1)),
    ]


def torsion_point(E, name):
    for label, _, P in torsion_table(E):
        if label == name:
            return P
    raise DomainError(f"no torsion point named '{name}'")


def torsion_orders_check(E):
    """n Q = O and m Q != O for 0 < m < n, for every table entry."""
    for _, order, P in torsion_table(E):
        if point_order(E, P) != order:
            return False
    return True


def rotated_points(E):
    """Q6^w, Q6^w^2, Q2^w, Q2^w^2."""
    a = E.half_root
    w, w2 = OMEGA, OMEGA**2
    return {
        "Q6w": ProjPoint.of(-w * a, -2 * w * a, 1),
        "Q6w2": ProjPoint.of(-w2 * a, -2 * w2 * a, 1),
        "Q2w": ProjPoint.of(-w * a, w * a, 1),
        "Q2w2": ProjPoint.of(-w2 * a, w2 * a, 1),
    }


def c12_relations(E, q6w=None):
    """Q6 + Q6^w + Q6^w^2 = O, Q6 - Q6^w = Q2^w^2, Q6 - Q6^w^2 = Q2^w."""
    q6 = torsion_point(E, "Q6")
    rot = rotated_points(E)
    q6w = rot["Q6w"] if q6w is None else q6w
    if not E.on_curve(q6w):
        return False
    checks = (
        same_point(ec_add(E, ec_add(E, q6, q6w), rot["Q6w2"]), O),
        same_point(ec_sub(E, q6, q6w), rot["Q2w2"]),
        same_point(ec_sub(E, q6, rot["Q6w2"]), rot["Q2w"]),
    )
    return all(checks)


def order3_map_check(E, P):
    """(x, y) -> (y - x, -x) against P + Q3; max-norm residual."""
    x, y = E.require(P).affine()
    moved = ProjPoint.of(y - x, -x, 1)
    return point_distance(ec_add(E, P, Q3), moved)


def add_forms_agree(E, P1, P2):
    return same_point(ec_add(E, P1, P2), ec_add_raw(E, P1, P2), tol=1e-8)


# --- The flow on E(c) ---

def flow_point(E, P):
    """Lambda(P) = (lambda(x, y) : lambda(y, x) : 1) for a finite P."""
    x, y = E.require(P).affine()
    u, v = lambda_eval(x, y), lambda_eval(y, x)
    if u.inf or v.inf:
        raise PoleError(f"Lambda is undefined at {P}")
    return ProjPoint.of(u.value, v.value, 1)


def lambda_at_infinity(E):
    """(Lambda(O), Lambda(Q3), Lambda(2Q3)) with A = sm(vs)/vs, B = cm(vs), vs = cbrt(c)."""
    vs = E.cbrt_c
    A = sm_over_u(vs)
    B = sm_cm(vs)[1].value
    c = E.c
    if abs(A) < ZERO_AB:
        return O, Q3, TWO_Q3
    if abs(B) < ZERO_AB:
        return TWO_Q3, O, Q3
    return (
        ProjPoint.of(1 / (A * B), B**2 / A, 1),
        ProjPoint.of(-c * A**2 / B, -1 / (A * B), 1),
        ProjPoint.of(-B**2 / A, c * A**2 / B, 1),
    )


def translation_q3_check(E, P):
    """Lambda(P + Q3) - (Lambda(P) + Q3), normalized to Z = 1."""
    lhs = flow_point(E, ec_add(E, P, Q3))
    rhs = ec_add(E, flow_point(E, P), Q3)
    return point_distance(lhs, rhs)


def lambda_preserves_curve(E, P):
    return E.residual(flow_point(E, P))
