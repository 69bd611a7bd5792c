# Copyright (c) 2025 VoidCanary-Lab
# SPDX-License-Identifier: GPL-3.0-or-later

"""Shared symbolic objects: the (x, y) ring, the catalogue of quadratic
vector fields with their orbit functions, and the avatars R and T of the
Dixonian flow written once for symbolic and numeric arguments alike."""

from dataclasses import dataclass

from sympy import QQ

from proflow.src.errors import DomainError
from proflow.src.exact_arith import is_homogeneous, poly_ring, substitute

XY, (X, Y) = poly_ring("x,y")

KINDS = ("identity", "phi_N", "exp", "tan", "log", "e", "t", "Lambda", "level4", "level6")


@dataclass(frozen=True)
class VectorField2:
    """Pair (w, r) of quadratic forms in QQ[x, y], or the zero field."""
    name: str
    w: object
    r: object

    def __post_init__(self):
        for part in (self.w, self.r):
            if getattr(part, "ring", None) != XY:
                raise DomainError(f"{self.name}: components must be polynomials in x, y")
            if part and is_homogeneous(part) != 2:
                raise DomainError(f"{self.name}: component {part} is not a quadratic form")

    def at(self, x, y):
        point = {"x": x, "y": y}
        return substitute(self.w, point), substitute(self.r, point)


def vector_field(kind, N=None):
    """Vector field of a catalogue flow; ``N`` is the level for phi_N."""
    x, y = X, Y
    zero = XY.zero
    half = QQ(1, 2)
    if kind == "identity":
        return VectorField2(kind, zero, zero)
    if kind == "phi_N":
        if N is None or N < 0:
            raise DomainError("phi_N needs a level N >= 0")
        return VectorField2(f"phi_{N}", (N - 1) * x * y, -y**2)
    table = {
        "Lambda": (x**2 - 2*x*y, y**2 - 2*x*y),
        "level4": (x**2 - 3*x*y, y**2 - 3*x*y),
        "level6": (x**2 - x*y, y**2 - 2*x*y),
        "exp": (x*y, zero),
        "tan": (x**2 + y**2, zero),
        "log": (-x**2 - x*y, -y**2),
        "e": (half * (x**2 - y**2), half * (y**2 - x**2)),
        "t": (x**2 + y**2, x**2 + y**2),
    }
    if kind not in table:
        raise DomainError(f"unknown flow kind '{kind}'")
    w, r = table[kind]
    return VectorField2(kind, w, r)


def orbit_polynomial(kind, N=None):
    """Homogeneous W with W(phi(x, y)) = W(x, y), or None when not polynomial."""
    x, y = X, Y
    if kind == "phi_N":
        return x * y**(N - 1) if N is not None and N >= 1 else None
    return {
        "Lambda": x*y*(x - y),
        "level4": x*y*(x - y)**2,
        "level6": (3*x - 2*y) * x**3 * y**2,
        "exp": y,
        "tan": y,
        "e": x + y,
        "t": x - y,
    }.get(kind)


# --- Avatars of the Dixonian flow ---
# Arguments may be field elements of QQ(A, B, x, y) or complex numbers.

def R_parts(A, B, x, y):
    num = x * (x - y) * (B - A * B**2 * y + A**2 * x * y)**2
    den = (x - B**3 * y) * (B**2 - A * x + A**2 * B * x * y)
    return num, den


def R_core_parts(A, B, x, y):
    """R with the factor (x - y) cancelled against x - B^3 y on E(c)."""
    num = x * (B - A * B**2 * y + A**2 * x * y)**2
    den = (1 + A**3 * x * y**2) * (B**2 - A * x + A**2 * B * x * y)
    return num, den


def T_parts(A, B, x, y):
    num = (x * (x - y) + A * B - A * x)**2 * y * (x - y)
    den = A * (B * (x - y) - A * x) * (A * B + x * (x - y) - B * (x - y))
    return num, den
