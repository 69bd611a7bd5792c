# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Projective flows over F_p and its one-point extension F_p ∪ {∞}.

Partial arithmetic returns None where the operation is undefined
(0·∞, ∞+∞, 0/0, ∞/∞). A functional equation instance with an undefined
intermediate imposes no constraint.

The 2-D flow

    phi_p(x, y) = (x²+y²+2x)/D • (x²+y²+2y)/D,   D = (x+1)² + (y+1)²

is completed to a bijection of (F̂_p)² when -1 is a square mod p. The
iteration identity n·phi^n(x) = phi(nx) fixes the completion only up to a
renaming of the added points that commutes with scaling, so five reference
points (∞•∞, ∞•0, 0•∞, ∞•1, 1•∞) are named and every other undefined cell is
derived. Names follow the split coordinates: with i² = -1, s = x+iy and
t = x-iy turn phi_p into two Möbius flows s/(a s+1), and

    (s, ∞) -> ∞•s,   (∞, t) -> t•∞,   (∞, ∞) -> ∞•∞.

The split form is then a cross-check on every derived cell.
"""

from dataclasses import dataclass, field
from functools import lru_cache

from sympy import isprime
from sympy.ntheory import legendre_symbol, sqrt_mod

from proflow.src.errors import CompletionError, DomainError

MAX_ENUM_P = 7
MAX_CARDINALITY_P = 13
AUDIT_STEPS = (2, 3)


class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "∞"


INF = _Infinity()


def _require_prime(p):
    if not isprime(p):
        raise DomainError(f"p must be prime, got {p}")


def field_points(p):
    """F̂_p in display order: 0 .. p-1, then ∞."""
    return list(range(p)) + [INF]


def fmt(a):
    return "∞" if a is INF else str(a)


# --- Partial arithmetic on F̂_p ---

def pf_neg(a, p):
    if a is None:
        return None
    return INF if a is INF else (-a) % p


def pf_add(a, b, p):
    if a is None or b is None:
        return None
    if a is INF and b is INF:
        return None
    if a is INF or b is INF:
        return INF
    return (a + b) % p


def pf_sub(a, b, p):
    return pf_add(a, pf_neg(b, p), p)


def pf_mul(a, b, p):
    if a is None or b is None:
        return None
    if a is INF or b is INF:
        other = b if a is INF else a
        return None if other == 0 else INF
    return (a * b) % p


def pf_div(a, b, p):
    if a is None or b is None:
        return None
    if b is INF:
        return None if a is INF else 0
    if b == 0:
        return None if a == 0 else INF
    if a is INF:
        return INF
    return (a * pow(b, -1, p)) % p


def mobius(a, x, p):
    """The 1-D flow x/(a x + 1) as a total map of F̂_p."""
    if x is INF:
        return INF if a == 0 else pow(a, -1, p)
    d = (a * x + 1) % p
    if d == 0:
        return INF
    return (x * pow(d, -1, p)) % p


# --- 1-D flows ---

def _instance(f, p, x, z):
    """(1 - z) f(x) = f(f(xz)(1 - z)/z): True/False, None if unconstrained."""
    if x not in f:
        return None
    one_minus_z = pf_sub(1, z, p)
    lhs = pf_mul(one_minus_z, f[x], p)
    xz = pf_mul(x, z, p)
    k = pf_div(one_minus_z, z, p)
    if lhs is None or xz is None or k is None or xz not in f:
        return None
    arg = pf_mul(f[xz], k, p)
    if arg is None or arg not in f:
        return None
    return f[arg] == lhs


def satisfies_prte(f, p):
    points = field_points(p)
    return all(_instance(f, p, x, z) is not False for x in points for z in points)


def prte_survivors(p):
    """Every f: F̂_p -> F̂_p satisfying the PrTE wherever it is defined."""
    _require_prime(p)
    if p > MAX_ENUM_P:
        raise DomainError(f"exhaustive 1-D search limited to p <= {MAX_ENUM_P}, got {p}")
    points = field_points(p)
    order = [INF] + list(range(p))
    pairs = [(x, z) for x in points for z in points]
    found = []
    table = {}

    def extend(depth):
        if depth == len(order):
            found.append(dict(table))
            return
        at = order[depth]
        for value in points:
            table[at] = value
            if all(_instance(table, p, x, z) is not False for x, z in pairs):
                extend(depth + 1)
        del table[at]

    extend(0)
    return found


def is_invertible_flow(f, p):
    """Constant, or a bijection with inverse x -> -f(-x)."""
    if len(set(f.values())) == 1:
        return True
    return all(f[pf_neg(f[pf_neg(x, p)], p)] == x for x in field_points(p))


def enumerate_1d_flows(p):
    """The 1-D projective flows over F̂_p: PrTE survivors that are constant or invertible."""
    return [f for f in prte_survivors(p) if is_invertible_flow(f, p)]


def degenerate_1d_flows(p):
    """PrTE survivors that are neither constant nor invertible."""
    return [f for f in prte_survivors(p) if not is_invertible_flow(f, p)]


def regular_1d_flows(p):
    """f ≡ 0, f ≡ ∞ and x/(ax+1) for a in F_p, keyed by label."""
    points = field_points(p)
    flows = {"zero": {x: 0 for x in points}, "infinity": {x: INF for x in points}}
    for a in range(p):
        flows[f"mobius({a})"] = {x: mobius(a, x, p) for x in points}
    return flows


def classify_1d_flow(values, p):
    """Label a table as zero, infinity or mobius(a); anything else is unclassified."""
    for label, table in regular_1d_flows(p).items():
        if all(values[x] == table[x] for x in field_points(p)):
            return label
    return "unclassified"


def enumerate_summary(p):
    survivors = prte_survivors(p)
    flows = [f for f in survivors if is_invertible_flow(f, p)]
    degenerate = [f for f in survivors if not is_invertible_flow(f, p)]
    labels = [classify_1d_flow(f, p) for f in flows]
    return {
        "p": p,
        "count": len(flows),
        "nonsingular": sum(label.startswith("mobius") for label in labels),
        "labels": labels,
        "unclassified": labels.count("unclassified"),
        "degenerate": [{fmt(x): fmt(f[x]) for x in field_points(p)} for f in degenerate],
    }


# --- Completed points ---

@dataclass(frozen=True)
class CompletedPoint:
    a: object
    b: object

    def scale(self, n, p):
        n %= p
        if n == 0:
            raise DomainError("scaling by a multiple of p")
        return CompletedPoint(pf_mul(n, self.a, p), pf_mul(n, self.b, p))

    def is_finite(self):
        return self.a is not INF and self.b is not INF

    def __str__(self):
        return f"{fmt(self.a)}•{fmt(self.b)}"


SPHERE_INFINITY = CompletedPoint(INF, INF)
# Added points named before derivation; one per class under scaling.
REFERENCE_POINTS = (
    SPHERE_INFINITY, CompletedPoint(INF, 0), CompletedPoint(0, INF), CompletedPoint(INF, 1), CompletedPoint(1, INF),
)


def completed_plane(p):
    points = field_points(p)
    return [CompletedPoint(x, y) for x in points for y in points]


def phi_p_direct(p, x, y):
    """phi_p on F_p², None where the denominator vanishes."""
    d = ((x + 1) ** 2 + (y + 1) ** 2) % p
    if d == 0:
        return None
    inv = pow(d, -1, p)
    r = x * x + y * y
    return CompletedPoint(((r + 2 * x) * inv) % p, ((r + 2 * y) * inv) % p)


def _sqrt_minus_one(p):
    roots = sqrt_mod(p - 1, p, all_roots=True)
    return min(roots) if roots else None


class _Splitting:
    """phi_p in the coordinates s = x+iy, t = x-iy."""

    def __init__(self, p):
        self.p = p
        self.i = _sqrt_minus_one(p)
        if self.i is None:
            raise DomainError(f"-1 is not a square mod {p}")
        self.a_s = pow(1 + self.i, -1, p)
        self.a_t = pow((1 - self.i) % p, -1, p)
        self.half = pow(2, -1, p)

    def to_st(self, P):
        p, i = self.p, self.i
        if P.is_finite():
            return (P.a + i * P.b) % p, (P.a - i * P.b) % p
        if P.a is INF and P.b is INF:
            return INF, INF
        if P.a is INF:
            return P.b, INF
        return INF, P.a

    def from_st(self, s, t):
        p = self.p
        if s is INF and t is INF:
            return CompletedPoint(INF, INF)
        if t is INF:
            return CompletedPoint(INF, s)
        if s is INF:
            return CompletedPoint(t, INF)
        x = ((s + t) * self.half) % p
        y = ((s - t) * pow(2 * self.i, -1, p)) % p
        return CompletedPoint(x, y)

    def __call__(self, P):
        s, t = self.to_st(P)
        return self.from_st(mobius(self.a_s, s, self.p), mobius(self.a_t, t, self.p))


@dataclass
class Completion:
    p: int
    table: dict
    named: list = field(default_factory=list)
    derived: list = field(default_factory=list)


def _walk(table, P, steps):
    for _ in range(steps):
        if P not in table:
            return None
        P = table[P]
    return P


def _derive(table, p, grid, derived):
    """Fill cells with phi(phi^(n-1)(x)) = n^-1 phi(nx) until nothing changes."""
    changed = True
    while changed:
        changed = False
        for n in range(2, p):
            inv = pow(n, -1, p)
            for P in grid:
                inner = _walk(table, P, n - 1)
                target = table.get(P.scale(n, p))
                if inner is None or target is None:
                    continue
                value = target.scale(inv, p)
                if inner in table:
                    if table[inner] != value:
                        raise CompletionError(
                            f"phi_{p}({inner}): {table[inner]} conflicts with {n}^-1 phi({n}({P})) = {value}"
                        )
                    continue
                table[inner] = value
                derived.append(
                    f"phi({inner}) = {n}^-1 phi({n}({P})) = {n}^-1 ({target}) = {table[inner]}"
                )
                changed = True


@lru_cache(maxsize=None)
def _torus_completion(p):
    split = _Splitting(p)
    grid = completed_plane(p)
    table = {}
    named = []
    derived = []
    for P in grid:
        if P.is_finite():
            value = phi_p_direct(p, P.a, P.b)
            if value is not None:
                table[P] = value
    for P in grid:
        if P not in table and split(P) in REFERENCE_POINTS:
            table[P] = split(P)
            named.append(f"phi({P}) = {table[P]}")
    _derive(table, p, grid, derived)
    missing = [str(P) for P in grid if P not in table]
    if missing:
        raise CompletionError(f"phi_{p}: no derivation for {', '.join(missing)}")
    for P in grid:
        if table[P] != split(P):
            raise CompletionError(f"phi_{p}({P}): derived {table[P]}, split form gives {split(P)}")
    if len(set(table.values())) != len(grid):
        raise CompletionError(f"phi_{p}: completed map is not injective")
    return Completion(p, table, named, derived)


@lru_cache(maxsize=None)
def _sphere_completion(p):
    minus_one = CompletedPoint(p - 1, p - 1)
    table = {}
    for x in range(p):
        for y in range(p):
            P = CompletedPoint(x, y)
            value = phi_p_direct(p, x, y)
            if value is None:
                if P != minus_one:
                    raise CompletionError(f"phi_{p} undefined at {P}")
                value = SPHERE_INFINITY
            table[P] = value
    table[SPHERE_INFINITY] = CompletedPoint(1, 1)
    return Completion(p, table, [f"phi({minus_one}) = ∞", "phi(∞) = 1•1"], [])


def complete_phi_p(p):
    """phi_p on its completed space: a torus (F̂_p)² or a sphere F_p² ∪ {∞}."""
    _require_prime(p)
    if p == 2:
        raise DomainError("phi_p needs an odd prime")
    if legendre_symbol(p - 1, p) == 1:
        done = _torus_completion(p)
    else:
        done = _sphere_completion(p)
    return Completion(done.p, dict(done.table), list(done.named), list(done.derived))


def phi_p_eval(p, x, y):
    """Completed value of phi_p at (x, y); None outside the completed space."""
    direct = None
    if x is not INF and y is not INF:
        direct = phi_p_direct(p, x % p, y % p)
    if direct is not None:
        return direct
    return complete_phi_p(p).table.get(CompletedPoint(x, y))


def table3(p=5):
    """Rows x = 0..p-1, ∞ of the completed phi_p, columns y likewise."""
    table = complete_phi_p(p).table
    if len(table) != (p + 1) ** 2:
        raise DomainError(f"-1 is not a square mod {p}; phi_{p} completes to a sphere")
    points = field_points(p)
    return [[table[CompletedPoint(x, y)] for y in points] for x in points]


def table3_lines(p=5):
    points = field_points(p)
    lines = [" ".join(["x\\y"] + [fmt(y) for y in points])]
    for x, row in zip(points, table3(p)):
        lines.append(" ".join([fmt(x)] + [str(cell) for cell in row]))
    return lines


def iteration_audit(table, p, steps=AUDIT_STEPS):
    """n·phi^n(x) = phi(nx) over the table; returns the failing (n, point)."""
    failures = []
    for n in steps:
        if n % p == 0:
            continue
        for P in table:
            lhs = _walk(table, P, n)
            rhs = table.get(P.scale(n, p))
            if lhs is None or rhs is None:
                continue
            if lhs.scale(n, p) != rhs:
                failures.append((n, str(P)))
    return failures


# --- Printed bijections ---

def _normalize_projective(X, Y, Z, p):
    for c in (Z, Y, X):
        if c % p:
            inv = pow(c, -1, p)
            return (X * inv) % p, (Y * inv) % p, (Z * inv) % p
    raise DomainError("(0:0:0) is not a projective point")


def flow_on_finite_space(kind, p):
    """Map of a printed flow on its natural space: quadratic, mobius, projective, phi_p."""
    _require_prime(p)
    if kind == "quadratic":
        out = {}
        for x in range(p):
            for y in range(p):
                d2 = (x - y) ** 2
                out[(x, y)] = ((d2 + x) % p, (d2 + y) % p)
        return out
    if kind == "mobius":
        points = field_points(p)
        return {(x, y): (mobius(1, x, p), mobius(1, y, p)) for x in points for y in points}
    if kind == "projective":
        space = [(x, y, 1) for x in range(p) for y in range(p)]
        space += [(x, 1, 0) for x in range(p)] + [(1, 0, 0)]
        return {P: _normalize_projective(P[0], P[1], P[0] + P[1] + P[2], p) for P in space}
    if kind == "phi_p":
        return complete_phi_p(p).table
    raise DomainError(f"unknown finite-field flow {kind!r}")


def is_bijection(mapping):
    values = list(mapping.values())
    return len(set(values)) == len(values) and set(values) == set(mapping)


def cardinality_checks(p):
    if p % 2 == 0 or p > MAX_CARDINALITY_P:
        raise DomainError(f"cardinality checks need an odd prime <= {MAX_CARDINALITY_P}, got {p}")
    _require_prime(p)
    torus = legendre_symbol(p - 1, p) == 1
    expected = {
        "quadratic": ("F_p^2", p * p),
        "mobius": ("(F_p+inf)^2", (p + 1) ** 2),
        "projective": ("P^2(F_p)", p * p + p + 1),
        "phi_p": ("torus", (p + 1) ** 2) if torus else ("sphere", p * p + 1),
    }
    report = []
    for kind, (space, size) in expected.items():
        mapping = flow_on_finite_space(kind, p)
        report.append({
            "flow": kind,
            "p": p,
            "space": space,
            "cardinality": len(mapping),
            "expected": size,
            "bijective": is_bijection(mapping),
        })
    return report


def genus0_point_count(p):
    """Affine points of x²y + xy² + x² + y² = 0 over F_p."""
    _require_prime(p)
    return sum(
        1
        for x in range(p)
        for y in range(p)
        if (x * x * y + x * y * y + x * x + y * y) % p == 0
    )
