"""Independent reference computations used by the tests (sympy and closed forms)."""

from __future__ import annotations

import itertools
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from fanorat.exact_algebra import QQ, MultiPoly


def to_sympy(f: MultiPoly):
    names = f.variable_names()
    syms = sympy.symbols(names)
    if len(names) == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = 0
    for e, c in f.terms.items():
        coeff = sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else int(c.code)
        term = coeff
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr), syms


def sympy_det_matrix(m):
    """Symbolic determinant of a matrix of MultiPoly via sympy (over Q or reduced mod p)."""
    syms = None
    rows = []
    for row in m:
        out = []
        for f in row:
            e, syms = to_sympy(f)
            out.append(e)
        rows.append(out)
    return sympy.expand(sympy.Matrix(rows).det(method="berkowitz")), syms


def poly_mod_p(expr, syms, p):
    return sympy.Poly(expr, *syms, modulus=p) if expr != 0 else None


def invariant_factors_sympy(rows):
    m = sympy.Matrix(rows)
    if m.rows == 0 or m.cols == 0:
        return []
    d = sympy_snf(m, domain=sympy.ZZ)
    return sorted(abs(int(d[i, i])) for i in range(min(d.shape)) if d[i, i] != 0)


def top_intersection_sympy(dims, classes):
    """Coefficient of prod H_i^{n_i} in the product of the given linear forms."""
    hs = sympy.symbols(f"H1:{len(dims) + 1}")
    prod = 1
    for c in classes:
        prod *= sum(a * h for a, h in zip(c, hs))
    poly = sympy.Poly(sympy.expand(prod), *hs)
    return int(poly.coeff_monomial(tuple(dims)))


# Cohomology of finite groups with trivial Z coefficients, from closed forms.

def cyclic_cohomology(n: int, degree: int) -> list[int]:
    """H^k(C_n, Z): Z, 0, Z/n, 0, Z/n, ..."""
    if degree == 0:
        return [0]
    if degree % 2 == 1 or n == 1:
        return []
    return [n]


def kunneth_c2xc2(degree: int) -> list[int]:
    """H^k(C2 x C2, Z) from the Kunneth formula with the Tor term."""
    def h(k):
        return cyclic_cohomology(2, k)

    factors = []
    for i in range(degree + 1):
        for a in h(i):
            for b in h(degree - i):
                if a == 0 and b == 0:
                    factors.append(0)
                elif a == 0 or b == 0:
                    factors.append(max(a, b))
                else:
                    factors.append(_gcd(a, b))
    for i in range(degree + 2):
        for a in h(i):
            for b in h(degree + 1 - i):
                if a and b:
                    factors.append(_gcd(a, b))
    return sorted(f for f in factors if f != 1)


def _gcd(a, b):
    from math import gcd
    return gcd(a, b)


# Schur multipliers M(G) = H^2(G, Q/Z) = H^3(G, Z) for the transitive subgroups of S4.
SCHUR_MULTIPLIER = {"S4": [2], "A4": [2], "D4": [2], "V4": [2], "C4": []}


def multilinear_component(cfg, coords, I):
    """I-component of u_1 (x) ... (x) u_r with respect to V_i = k v_i + Vbar_i, computed directly."""
    F = cfg.field
    coeff = F.one
    vecs = []
    for i, u in enumerate(coords):
        u = [F(x) for x in u]
        v = cfg.base[i]
        piv = next(k for k, x in enumerate(v) if x != 0)
        a = u[piv] / v[piv]
        rest = [u[k] - a * v[k] for k in range(len(u)) if k != piv]
        if i in I:
            vecs.append(rest)
        else:
            coeff = coeff * a
    out = []
    for idx in itertools.product(*[range(len(v)) for v in vecs]):
        x = coeff
        for v, k in zip(vecs, idx):
            x = x * v[k]
        out.append(x)
    return out
