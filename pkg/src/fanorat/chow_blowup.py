"""Intersection numbers on products of projective spaces and on blowups along curves."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd
from typing import NamedTuple, Sequence


class DegreeMismatch(ValueError):
    pass


class BasisMismatch(ValueError):
    pass


@dataclass(frozen=True)
class DivClass:
    """Integer divisor class: coefficient vector over a labelled basis."""

    basis: tuple[str, ...]
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.basis) != len(self.coeffs):
            raise BasisMismatch("basis and coefficient vector have different lengths")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def _same(self, other: "DivClass"):
        if self.basis != other.basis:
            raise BasisMismatch(f"cannot combine classes over {self.basis} and {other.basis}")

    def __add__(self, other: "DivClass") -> "DivClass":
        self._same(other)
        return DivClass(self.basis, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        self._same(other)
        return DivClass(self.basis, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivClass(self.basis, tuple(-a for a in self.coeffs))

    def __rmul__(self, k: int) -> "DivClass":
        return DivClass(self.basis, tuple(k * a for a in self.coeffs))

    def __getitem__(self, name: str) -> int:
        return self.coeffs[self.basis.index(name)]

    def __str__(self):
        parts = []
        for name, c in zip(self.basis, self.coeffs):
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append(f"{sign} {mag}{name}")
        if not parts:
            return "0"
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def hyperplane_basis(r: int) -> tuple[str, ...]:
    return tuple(f"H{i + 1}" for i in range(r))


class ProductChowRing:
    """Chow ring of P^n1 x ... x P^nr; elements are dicts exponent-tuple -> integer."""

    def __init__(self, dims: Sequence[int]):
        self.dims = tuple(int(n) for n in dims)
        if any(n < 0 for n in self.dims):
            raise ValueError("negative factor dimension")
        self.r = len(self.dims)
        self.basis = hyperplane_basis(self.r)
        self.dim = sum(self.dims)

    def reduce(self, elem: dict) -> dict:
        return {e: c for e, c in elem.items()
                if c and all(k <= n for k, n in zip(e, self.dims))}

    def one(self) -> dict:
        return {(0,) * self.r: 1}

    def divisor(self, cls) -> dict:
        if isinstance(cls, DivClass):
            if cls.basis != self.basis:
                raise BasisMismatch(f"expected a class over {self.basis}")
            coeffs = cls.coeffs
        else:
            coeffs = tuple(cls)
            if len(coeffs) != self.r:
                raise BasisMismatch("multidegree length does not match the number of factors")
        out = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * self.r
                e[i] = 1
                out[tuple(e)] = c
        return self.reduce(out)

    def mul(self, x: dict, y: dict) -> dict:
        out: dict = {}
        for e1, c1 in x.items():
            for e2, c2 in y.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if all(k <= n for k, n in zip(e, self.dims)):
                    out[e] = out.get(e, 0) + c1 * c2
        return {e: c for e, c in out.items() if c}

    def degree(self, x: dict) -> int:
        return x.get(self.dims, 0)


def top_intersection(ring: ProductChowRing, classes) -> int:
    """Coefficient of the point class in the product of the given divisor classes."""
    classes = list(classes)
    if len(classes) != ring.dim:
        raise DegreeMismatch(f"{len(classes)} divisor factors given, the ambient has dimension {ring.dim}")
    prod = ring.one()
    for c in classes:
        prod = ring.mul(prod, ring.divisor(c))
        if not prod:
            return 0
    return ring.degree(prod)


def anticanonical_class(dims: Sequence[int], divisors: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """-K of the complete intersection by adjunction, as a multidegree."""
    return tuple(n + 1 - sum(d[i] for d in divisors) for i, n in enumerate(dims))


def ci_anticanonical_degree(dims: Sequence[int], divisors: Sequence[Sequence[int]]) -> int:
    """(-K)^3 of a threefold complete intersection of the given multidegrees."""
    dims = tuple(dims)
    divisors = [tuple(d) for d in divisors]
    if sum(dims) - len(divisors) != 3:
        raise DegreeMismatch(f"complete intersection has dimension {sum(dims) - len(divisors)}, not 3")
    if any(len(d) != len(dims) for d in divisors):
        raise DegreeMismatch("divisor multidegree length does not match the number of factors")
    ring = ProductChowRing(dims)
    mk = anticanonical_class(dims, divisors)
    if any(c <= 0 for c in mk):
        warnings.warn(f"-K = {mk} has nonpositive components; not ample", stacklevel=2)
    return top_intersection(ring, [mk] * 3 + divisors)


def fano_index(dims: Sequence[int], divisors: Sequence[Sequence[int]]) -> int:
    g = 0
    for c in anticanonical_class(dims, divisors):
        g = gcd(g, c)
    return g


class BlowupTriple(NamedTuple):
    """Triple products H^3, H^2.E, H.E^2, E^3 on a blowup along a curve."""

    H3: int
    H2E: int
    HE2: int
    E3: int


def hhe_products(g: int, m: int) -> BlowupTriple:
    if m not in (1, 2):
        raise ValueError("m must be 1 or 2")
    return BlowupTriple(2 * g - 2, 0, 2 * (m - 2), m - 1)


def cube_on_blowup(t: BlowupTriple, a: int, b: int) -> int:
    """(aH + bE)^3."""
    return a ** 3 * t.H3 + 3 * a * a * b * t.H2E + 3 * a * b * b * t.HE2 + b ** 3 * t.E3


def curve_blowup_products(minusK_cubed_Y: int, minusK_dot_C: int, genus_C: int,
                          index: int = 1) -> BlowupTriple:
    """Triple products for the blowup of a threefold Y along a smooth curve C.

    H is the pullback of the ample generator -K_Y / index, so with the default
    index 1 it is the pullback of -K_Y itself.  E^3 = -deg N_C = 2 - 2g(C) + K_Y.C.
    """
    if minusK_cubed_Y % index ** 3 or minusK_dot_C % index:
        raise ValueError("-K_Y is not divisible by the given index")
    return BlowupTriple(minusK_cubed_Y // index ** 3, 0, -(minusK_dot_C // index),
                        2 - 2 * genus_C - minusK_dot_C)


# Blowup models: (-K_Y)^3, -K_Y.C, g(C), index of Y.
QUADRIC_QUARTIC = (54, 12, 0, 3)
P3_SEXTIC_GENUS3 = (64, 24, 3, 4)


def anticanonical_on_blowup(t: BlowupTriple, index: int) -> int:
    """(-K)^3 = (index*H - E)^3 for the blowup of an index-`index` ambient."""
    return cube_on_blowup(t, index, -1)


class LinkNumerology(NamedTuple):
    anticanonical_cube: int
    A_square_times_K: int
    would_be_surface_degree: int
    degB: int
    recomputed: bool


def x44_link_numerology(g: int, m: int) -> LinkNumerology:
    """Numerical data of the genus-g link: (-K)^3, (A+)^2.(-K), (A+)^2 and deg B+.

    Values are the closed forms.  For m in {1, 2} the first two are also
    recomputed as triple products on the blowup and must agree; other m are
    evaluated from the closed forms only and flagged.
    """
    cube, mixed = 2 * (g - m - 3), 2 * (g - m - 8)
    recomputed = m in (1, 2)
    if recomputed:
        t = hhe_products(g, m)
        if cube_on_blowup(t, 1, -m) != cube or _mixed_cube(t, (1, -(m + 1)), (1, -m)) != mixed:
            raise ArithmeticError("triple products disagree with the closed forms")
    else:
        warnings.warn(f"m = {m} lies outside the range m in {{1, 2}} of the link", stacklevel=2)
    return LinkNumerology(cube, mixed, 7 - m, 8 - 2 * m, recomputed)


def _mixed_cube(t: BlowupTriple, x: tuple[int, int], y: tuple[int, int]) -> int:
    """x^2 . y for classes x = aH + bE, y = cH + dE."""
    a, b = x
    c, d = y
    return (a * a * c * t.H3 + (a * a * d + 2 * a * b * c) * t.H2E
            + (2 * a * b * d + b * b * c) * t.HE2 + b * b * d * t.E3)
