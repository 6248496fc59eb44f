"""Determinantal models for nets of bilinear forms.

Type (3,3): a net A = <a_1, a_2, a_3> of bilinear forms on V_1 x V_2 (dim 4 each)
with a base point (v_1, v_2) on X = {a_i(v_1, v_2) = 0}.  Type (2,2,2): three
3x3 forms F12, F13, F23 with a common base point.

Forms are matrices acting as a(x, y) = x^T a y.  Coordinates on Vbar_i come from
dropping the pivot coordinate of v_i, as in the toric link.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exact_algebra import (GF, QQ, FFElement, MultiPoly, bilinear, field_det, is_prime, kernel,
                            normalize_projective, parse_field, poly_det, projective_points, rank,
                            vec_mat, mat_vec)

DEGENERATE_FIBER = "degenerate fiber"
NON_REDUCED = "non-reduced fiber"


class PreconditionError(ValueError):
    """A mathematical hypothesis of the construction fails for this input."""


class DegenerateFormError(PreconditionError):
    pass


def _pivot(v) -> int:
    return next(k for k, x in enumerate(v) if x != 0)


def _complement(v) -> list[int]:
    piv = _pivot(v)
    return [k for k in range(len(v)) if k != piv]


def _embed(v, coords, F):
    out = [F.zero] * len(v)
    for k, x in zip(_complement(v), coords):
        out[k] = x
    return out


def _lin_comb(mats, lam, F):
    n, m = len(mats[0]), len(mats[0][0])
    return [[sum((l * M[i][j] for l, M in zip(lam, mats)), F.zero) for j in range(m)] for i in range(n)]


def _transpose(m):
    return [list(c) for c in zip(*m)]


# ---------------------------------------------------------------------------
# type (3,3) data


@dataclass(frozen=True)
class BilinearNet33:
    field: object
    mats: tuple

    def __post_init__(self):
        F = self.field
        mats = tuple(tuple(tuple(F(x) for x in row) for row in M) for M in self.mats)
        if len(mats) != 3 or any(len(M) != 4 or any(len(r) != 4 for r in M) for M in mats):
            raise ValueError("a (3,3) net consists of three 4x4 matrices")
        if rank([[x for row in M for x in row] for M in mats], F) != 3:
            raise ValueError("the three forms are linearly dependent")
        object.__setattr__(self, "mats", mats)

    def form(self, lam) -> list[list]:
        return _lin_comb(self.mats, [self.field(x) for x in lam], self.field)

    def scaled(self, c) -> "BilinearNet33":
        c = self.field(c)
        return BilinearNet33(self.field, tuple(tuple(tuple(c * x for x in row) for row in M) for M in self.mats))


@dataclass(frozen=True)
class BasePoint33:
    v1: tuple
    v2: tuple

    def complements(self):
        return _complement(self.v1), _complement(self.v2)


def validate_base_point(net: BilinearNet33, x0: BasePoint33) -> BasePoint33:
    F = net.field
    v1, v2 = tuple(F(x) for x in x0.v1), tuple(F(x) for x in x0.v2)
    if len(v1) != 4 or len(v2) != 4 or all(x == 0 for x in v1) or all(x == 0 for x in v2):
        raise ValueError("base point vectors must be nonzero 4-vectors")
    if any(bilinear(M, v1, v2, F) != 0 for M in net.mats):
        raise PreconditionError("base point does not lie on X: some a_i(v1, v2) != 0")
    return BasePoint33(v1, v2)


@dataclass(frozen=True)
class PlaneQuartic:
    poly: MultiPoly
    degenerate: bool


LAMBDA = (("l", 3),)


def discriminant_quartic(net: BilinearNet33) -> PlaneQuartic:
    """det(l1 a1 + l2 a2 + l3 a3) as a form in l1, l2, l3."""
    F = net.field
    ls = [MultiPoly.variable(LAMBDA, ("l", k), F) for k in range(3)]
    m = [[sum((ls[k] * net.mats[k][i][j] for k in range(3)), MultiPoly(LAMBDA, field=F))
          for j in range(4)] for i in range(4)]
    f = poly_det(m)
    return PlaneQuartic(f, f.is_zero() or f.multidegree() != (4,))


# ---------------------------------------------------------------------------
# smoothness of plane quartics


def _monomials(n: int, deg: int) -> list[tuple[int, ...]]:
    return [tuple(c) for c in itertools.product(range(deg + 1), repeat=n) if sum(c) == deg]


def macaulay_rank(f: MultiPoly) -> tuple[int, int]:
    """Rank of (g1, g2, g3) -> sum g_i * d_i f from S_4^3 to S_7, with dim S_7.

    For a quartic in odd characteristic the partials have a common zero over the
    algebraic closure exactly when this map is not surjective: three ternary
    cubics without common zero form a complete intersection whose ideal contains
    every form of degree >= 7, and a common zero is a zero of the whole image.
    """
    F = f.field
    parts = [f.partial(i) for i in range(3)]
    deg_mult = 4
    target = _monomials(3, 7)
    pos = {e: k for k, e in enumerate(target)}
    rows = []
    for g in parts:
        for mono in _monomials(3, deg_mult):
            row = [F.zero] * len(target)
            for e, c in g.terms.items():
                row[pos[tuple(a + b for a, b in zip(e, mono))]] = c
            rows.append(row)
    return rank(rows, F), len(target)


@dataclass(frozen=True)
class SmoothnessResult:
    smooth: bool
    witness: tuple | None
    method: str
    details: dict


def _reduce_mod(f: MultiPoly, p: int):
    F = GF(p)
    g = MultiPoly(f.blocks, field=F)
    for e, c in f.terms.items():
        c = Fraction(c)
        if c.denominator % p == 0:
            return None
        v = F(c)
        if v != 0:
            g.terms[e] = v
    return g


def singular_points(f: MultiPoly, field, max_points: int = 250_000) -> list[tuple]:
    """Common zeros of the three partials in P^2(field), by exhaustion."""
    if field.order is None:
        raise ValueError("exhaustive search needs a finite field")
    if field.order ** 2 + field.order + 1 > max_points:
        raise ValueError(f"P^2 over {field} is too large to exhaust")
    g = f if f.field is field else lift_poly(f, field)
    parts = [g.partial(i) for i in range(3)]
    out = []
    for pt in projective_points(field, 2):
        if all(d.evaluate(pt) == 0 for d in parts):
            out.append(tuple(pt))
    return out


def lift_poly(f: MultiPoly, field) -> MultiPoly:
    """Coefficients of a prime-field polynomial viewed in an extension field."""
    return f.map_coefficients(lambda c: lift_scalar(c, field), field)


def lift_scalar(c, field):
    if isinstance(c, FFElement):
        if c.field.d != 1 or c.field.p != field.characteristic:
            raise ValueError("can only lift prime-field elements")
        return field(c.code)
    return field(c)


def witness_search(f: MultiPoly, max_points: int = 250_000):
    """Look for a singular point over GF(p^d), d = 1, 2, ..., while P^2 stays small."""
    F = f.field
    d = 1
    while True:
        try:
            ext = F if d == 1 else GF(F.p, d)
        except Exception:
            return None
        if ext.order ** 2 + ext.order + 1 > max_points:
            return None
        pts = singular_points(f, ext, max_points)
        if pts:
            return pts[0], ext
        d += 1


def is_smooth_quartic(f, field=None, primes: Sequence[int] = (101, 103, 107, 109, 113)) -> SmoothnessResult:
    """Certify smoothness of a plane quartic; on failure try to exhibit a singular point."""
    if isinstance(f, PlaneQuartic):
        f = f.poly
    field = field or f.field
    if f.is_zero() or f.multidegree() != (4,):
        raise ValueError("input is not a nonzero quartic form")
    if field.characteristic == 2:
        raise ValueError("characteristic 2 is not supported")
    if field.characteristic == 0:
        tried = []
        for p in primes:
            g = _reduce_mod(f, p)
            if g is None or g.multidegree() != (4,):
                continue
            rk, dim = macaulay_rank(g)
            tried.append(p)
            if rk == dim:
                return SmoothnessResult(True, None, "good reduction", {"prime": p, "rank": rk, "dim": dim})
        rk, dim = macaulay_rank(f)
        return SmoothnessResult(rk == dim, None, "exact rational rank",
                                {"primes_tried": tried, "rank": rk, "dim": dim})
    rk, dim = macaulay_rank(f)
    if rk == dim:
        return SmoothnessResult(True, None, "macaulay", {"rank": rk, "dim": dim})
    found = witness_search(f)
    wit, ext = (found if found else (None, None))
    return SmoothnessResult(False, wit, "macaulay", {"rank": rk, "dim": dim,
                                                    "witness_field": repr(ext) if ext else None})


def smoothness_dichotomy(net: BilinearNet33, lam, field=None) -> dict:
    """At a singular point lam of the discriminant: corank of a >= 2, or the
    kernel pair of a lies on X.  Works over an extension field if given."""
    F = field or net.field
    mats = [[[lift_scalar(x, F) for x in row] for row in M] for M in net.mats]
    a = _lin_comb(mats, list(lam), F)
    corank = 4 - rank(a, F)
    on_x = None
    if corank == 1:
        left = kernel(_transpose(a), F)[0]
        right = kernel(a, F)[0]
        on_x = all(bilinear(M, left, right, F) == 0 for M in mats)
    return {"corank": corank, "kernel_pair_on_X": on_x, "holds": corank >= 2 or bool(on_x)}


# ---------------------------------------------------------------------------
# lines through the base point, xi and X+


@dataclass(frozen=True)
class LineReport:
    left_kernel_dim: int
    right_kernel_dim: int
    has_line: bool


def lines_through_base_point(net: BilinearNet33, x0: BasePoint33) -> LineReport:
    """Kernels of a -> a(v1, -) and a -> a(-, v2) on A."""
    F = net.field
    x0 = validate_base_point(net, x0)
    left_rows = [vec_mat(x0.v1, M, F) for M in net.mats]       # a_i(v1, -)
    right_rows = [mat_vec(M, x0.v2, F) for M in net.mats]      # a_i(-, v2)
    lk = 3 - rank(left_rows, F)
    rk = 3 - rank(right_rows, F)
    return LineReport(lk, rk, lk > 0 or rk > 0)


XI33_BLOCKS = (("x", 3), ("y", 3))
XI33_COLUMN_DEGREES = ((1, 1), (1, 0), (0, 1))


def build_xi_33(net: BilinearNet33, x0: BasePoint33) -> list[list[MultiPoly]]:
    """Rows a_1, a_2, a_3; columns abar_i(x, y), a_i(x, v2), a_i(v1, y) with x, y on Vbar_1, Vbar_2."""
    F = net.field
    x0 = validate_base_point(net, x0)
    c1, c2 = x0.complements()
    rows = []
    for M in net.mats:
        bar = [[M[i][j] for j in c2] for i in c1]
        left = [sum((M[i][j] * x0.v2[j] for j in range(4)), F.zero) for i in c1]
        right = [sum((x0.v1[i] * M[i][j] for i in range(4)), F.zero) for j in c2]
        rows.append([MultiPoly.bilinear_form(XI33_BLOCKS, "x", "y", bar, F),
                     MultiPoly.linear_form(XI33_BLOCKS, "x", left, F),
                     MultiPoly.linear_form(XI33_BLOCKS, "y", right, F)])
    return rows


def column_degrees(xi, row_twists=None) -> list:
    """Multidegree of each column read off its nonzero entries (entry degree plus row twist)."""
    out = []
    for j in range(len(xi[0])):
        found = set()
        for i, row in enumerate(xi):
            d = row[j].multidegree()
            if row[j].is_zero():
                continue
            if d is None:
                found.add(None)
                continue
            if row_twists is not None:
                d = tuple(a + b for a, b in zip(d, row_twists[i]))
            found.add(d)
        out.append(found.pop() if len(found) == 1 else None)
    return out


@dataclass(frozen=True)
class XPlus:
    poly: MultiPoly
    bidegree: tuple | None
    degenerate: bool


def xplus_equation(net: BilinearNet33, x0: BasePoint33) -> XPlus:
    f = poly_det(build_xi_33(net, x0))
    bideg = f.multidegree()
    return XPlus(f, bideg, f.is_zero())


# ---------------------------------------------------------------------------
# conic bundle over P(A)


@dataclass(frozen=True)
class ConicFiber:
    fiber_matrix: tuple
    is_singular_fiber: bool
    K1: tuple
    K2: tuple


def conic_fiber(net: BilinearNet33, x0: BasePoint33, lam, check_lines: bool = True):
    """Conic over [a], a = sum lam_i a_i, in P(K1) x P(K2) where K1 = ker a(-, v2)
    on Vbar_1 and K2 = ker a(v1, -) on Vbar_2: the 2x2 block of abar."""
    F = net.field
    x0 = validate_base_point(net, x0)
    if check_lines and lines_through_base_point(net, x0).has_line:
        raise PreconditionError("the base point lies on a line of X (has_line = true)")
    lam = [F(x) for x in lam]
    if all(x == 0 for x in lam):
        raise ValueError("lambda must be a nonzero vector")
    a = net.form(lam)
    c1, c2 = x0.complements()
    left = [sum((a[i][j] * x0.v2[j] for j in range(4)), F.zero) for i in c1]    # a(-, v2) on Vbar_1
    right = [sum((x0.v1[i] * a[i][j] for i in range(4)), F.zero) for j in c2]   # a(v1, -) on Vbar_2
    if all(x == 0 for x in left) or all(x == 0 for x in right):
        return DEGENERATE_FIBER
    K1 = kernel([left], F)
    K2 = kernel([right], F)
    bar = [[a[i][j] for j in c2] for i in c1]
    B = tuple(tuple(bilinear(bar, s, t, F) for t in K2) for s in K1)
    det = B[0][0] * B[1][1] - B[0][1] * B[1][0]
    return ConicFiber(B, det == 0, tuple(map(tuple, K1)), tuple(map(tuple, K2)))


@dataclass(frozen=True)
class FiberComponent:
    ruling: int                 # 1: {pt} x P^1, 2: P^1 x {pt}
    linear_form: tuple          # coefficients on K_ruling coordinates
    point: tuple                # the point of P(Vbar_ruling) it lies over, normalized
    contracted_by: int          # index of the projection Y+ -> P(Vbar_i) contracting it


def singular_fiber_components(net: BilinearNet33, x0: BasePoint33, lam):
    """Split a singular conic fiber: a rank-one block B = alpha beta^T gives the
    lines {alpha.s = 0} x P^1 and P^1 x {beta.t = 0}."""
    F = net.field
    fib = conic_fiber(net, x0, lam)
    if fib == DEGENERATE_FIBER:
        return DEGENERATE_FIBER
    if not fib.is_singular_fiber:
        raise PreconditionError("fiber is smooth")
    B = fib.fiber_matrix
    if all(x == 0 for row in B for x in row):
        return NON_REDUCED
    i0, j0 = next((i, j) for i in range(2) for j in range(2) if B[i][j] != 0)
    alpha = tuple(B[i][j0] for i in range(2))
    beta = tuple(B[i0][j] / B[i0][j0] for j in range(2))
    comps = []
    for ruling, form, K in ((1, alpha, fib.K1), (2, beta, fib.K2)):
        s = (-form[1], form[0])            # the zero of the linear form on P(K)
        pt = [s[0] * K[0][k] + s[1] * K[1][k] for k in range(3)]
        comps.append(FiberComponent(ruling, normalize_projective(form), normalize_projective(pt), ruling))
    return comps


def discriminant_census(net: BilinearNet33, x0: BasePoint33, lams) -> dict:
    """Dual-path agreement: singular conic fiber versus vanishing discriminant."""
    disc = discriminant_quartic(net).poly
    out = {"samples": 0, "singular": 0, "violations": [], "degenerate": 0}
    for lam in lams:
        fib = conic_fiber(net, x0, lam, check_lines=False)
        if fib == DEGENERATE_FIBER:
            out["degenerate"] += 1
            continue
        on_gamma = disc.evaluate([net.field(x) for x in lam]) == 0
        out["samples"] += 1
        out["singular"] += int(fib.is_singular_fiber)
        if fib.is_singular_fiber != on_gamma:
            out["violations"].append(tuple(lam))
    return out


def random_projective_point(field, n: int, rng) -> list:
    while True:
        v = [field.random_element(rng) for _ in range(n + 1)]
        if any(x != 0 for x in v):
            return list(normalize_projective(v))


def points_on_discriminant(net: BilinearNet33, limit: int | None = None) -> list:
    """Points of the discriminant quartic in P^2 over the net's (finite) field."""
    disc = discriminant_quartic(net).poly
    out = []
    for pt in projective_points(net.field, 2):
        if disc.evaluate(pt) == 0:
            out.append(tuple(pt))
            if limit and len(out) >= limit:
                break
    return out


# ---------------------------------------------------------------------------
# type (2,2,2)


XI222_BLOCKS = (("x", 2), ("y", 2), ("z", 2))
XI222_COLUMN_TWISTS = ((1, 1, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1))
XI222_ROW_TWISTS = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
RESTRICTIONS = {"xi_23": (2, 3), "xi_13": (1, 3), "xi_12": (1, 2)}


@dataclass(frozen=True)
class Net222:
    field: object
    F12: tuple
    F13: tuple
    F23: tuple
    v1: tuple
    v2: tuple
    v3: tuple

    def __post_init__(self):
        F = self.field
        for name in ("F12", "F13", "F23"):
            M = tuple(tuple(F(x) for x in row) for row in getattr(self, name))
            if len(M) != 3 or any(len(r) != 3 for r in M):
                raise ValueError(f"{name} must be 3x3")
            object.__setattr__(self, name, M)
        for name in ("v1", "v2", "v3"):
            v = tuple(F(x) for x in getattr(self, name))
            if len(v) != 3 or all(x == 0 for x in v):
                raise ValueError(f"{name} must be a nonzero 3-vector")
            object.__setattr__(self, name, v)
        for name, (a, b) in (("F12", ("v1", "v2")), ("F13", ("v1", "v3")), ("F23", ("v2", "v3"))):
            if bilinear(getattr(self, name), getattr(self, a), getattr(self, b), F) != 0:
                raise PreconditionError(f"base point is not on the divisor {name} = 0")


@dataclass(frozen=True)
class Xi222:
    matrix: list
    column_degrees: tuple
    certificates: dict


def build_xi_222(net: Net222, rng=None, attempts: int = 200) -> Xi222:
    F = net.field
    for name in ("F12", "F13", "F23"):
        if field_det(getattr(net, name), F) == 0:
            raise DegenerateFormError(f"bilinear form {name} is degenerate (det = 0)")
    vs = {1: net.v1, 2: net.v2, 3: net.v3}
    blk = {1: "x", 2: "y", 3: "z"}
    zero = MultiPoly(XI222_BLOCKS, field=F)

    def entries(M, i, j):
        ci, cj = _complement(vs[i]), _complement(vs[j])
        vi, vj = vs[i], vs[j]
        bar = MultiPoly.bilinear_form(XI222_BLOCKS, blk[i], blk[j], [[M[a][b] for b in cj] for a in ci], F)
        left = MultiPoly.linear_form(XI222_BLOCKS, blk[i],
                                     [sum((M[a][b] * vj[b] for b in range(3)), F.zero) for a in ci], F)
        right = MultiPoly.linear_form(XI222_BLOCKS, blk[j],
                                      [sum((vi[a] * M[a][b] for a in range(3)), F.zero) for b in cj], F)
        return bar, left, right

    b12, l12, r12 = entries(net.F12, 1, 2)   # l12 = F12(-, v2), r12 = F12(v1, -)
    b13, l13, r13 = entries(net.F13, 1, 3)
    b23, l23, r23 = entries(net.F23, 2, 3)
    xi = [[b12, zero, l12, r12],
          [b13, l13, zero, r13],
          [b23, l23, r23, zero]]
    for i, row in enumerate(xi):
        for j, e in enumerate(row):
            want = tuple(c - r for c, r in zip(XI222_COLUMN_TWISTS[j], XI222_ROW_TWISTS[i]))
            if not e.is_zero() and e.multidegree() != want:
                raise AssertionError(f"entry ({i},{j}) has degree {e.multidegree()}, expected {want}")
    cols = tuple(column_degrees(xi, XI222_ROW_TWISTS))
    rng = rng or random.Random(0)
    certs = {}
    for name, (j1, j2) in RESTRICTIONS.items():
        certs[name] = _rank2_witness(xi, (j1, j2), F, rng, attempts)
    return Xi222(xi, cols, certs)


def _rank2_witness(xi, cols, F, rng, attempts):
    finite = F.order is not None
    for t in range(attempts):
        if finite:
            pt = [F.random_element(rng) for _ in range(6)]
        else:
            pt = [F(rng.randint(-5, 5)) for _ in range(6)]
        sub = [[xi[i][j].evaluate(pt) for j in cols] for i in range(3)]
        if rank(sub, F) == 2:
            return {"ok": True, "point": tuple(F.format(x) for x in pt), "attempts": t + 1}
    return {"ok": False, "point": None, "attempts": attempts}


# ---------------------------------------------------------------------------
# fixtures: seeded search


def _random_matrix(F, rng, n, m):
    return [[F.random_element(rng) for _ in range(m)] for _ in range(n)]


def _force_zero(M, v1, v2, F):
    """Adjust the (pivot, pivot) entry so that v1^T M v2 = 0."""
    p1, p2 = _pivot(v1), _pivot(v2)
    val = bilinear(M, v1, v2, F)
    M[p1][p2] = M[p1][p2] - val / (v1[p1] * v2[p2])
    return M


def random_net33(F, rng, v1=None, v2=None):
    while True:
        a = list(v1) if v1 else random_projective_point(F, 3, rng)
        b = list(v2) if v2 else random_projective_point(F, 3, rng)
        mats = [_force_zero(_random_matrix(F, rng, 4, 4), a, b, F) for _ in range(3)]
        try:
            return BilinearNet33(F, tuple(map(tuple, mats))), BasePoint33(tuple(a), tuple(b))
        except ValueError:
            continue


def has_line_net33(F, rng):
    """Net with a_1(v1, -) = 0 and a_2(-, v2) = 0 built in."""
    while True:
        v1 = random_projective_point(F, 3, rng)
        v2 = random_projective_point(F, 3, rng)
        m1 = _random_matrix(F, rng, 4, 4)
        m2 = _random_matrix(F, rng, 4, 4)
        m3 = _force_zero(_random_matrix(F, rng, 4, 4), v1, v2, F)
        # project rows/columns so that v1^T m1 = 0 and m2 v2 = 0
        p1, p2 = _pivot(v1), _pivot(v2)
        row = vec_mat(v1, m1, F)
        for j in range(4):
            m1[p1][j] = m1[p1][j] - row[j] / v1[p1]
        col = mat_vec(m2, v2, F)
        for i in range(4):
            m2[i][p2] = m2[i][p2] - col[i] / v2[p2]
        try:
            return BilinearNet33(F, (tuple(map(tuple, m1)), tuple(map(tuple, m2)), tuple(map(tuple, m3)))), \
                BasePoint33(tuple(v1), tuple(v2))
        except ValueError:
            continue


def twisted_net33(F, rng):
    """Net over GF(p^2) with Frobenius(a_i) = a_i^T and base point v1 = v2 = e_1.

    Frobenius then swaps the two factors: the discriminant has prime-field
    coefficients and over prime-field points of it the two fiber components
    are exchanged.
    """
    if F.d != 2:
        raise ValueError("twisted nets live over a quadratic extension")
    p = F.p
    e1 = (F.one, F.zero, F.zero, F.zero)
    while True:
        mats = []
        for _ in range(3):
            M = [[F.zero] * 4 for _ in range(4)]
            for i in range(4):
                for j in range(i, 4):
                    if i == j:
                        M[i][i] = F(rng.randrange(p)) if i else F.zero
                    else:
                        z = F.random_element(rng)
                        M[i][j] = z
                        M[j][i] = z ** p
            mats.append(tuple(map(tuple, M)))
        try:
            return BilinearNet33(F, tuple(mats)), BasePoint33(e1, e1)
        except ValueError:
            continue


def net33_certificate(net: BilinearNet33, x0: BasePoint33) -> dict:
    disc = discriminant_quartic(net)
    sm = is_smooth_quartic(disc) if not disc.degenerate else None
    lines = lines_through_base_point(net, x0)
    xp = xplus_equation(net, x0)
    return {
        "quartic_degree": disc.poly.total_degree(),
        "smooth": bool(sm and sm.smooth),
        "macaulay_rank": sm.details.get("rank") if sm else None,
        "kernel_dims": [lines.left_kernel_dim, lines.right_kernel_dim],
        "has_line": lines.has_line,
        "xplus_bidegree": list(xp.bidegree) if xp.bidegree else None,
    }


def search_smooth_net33(F, seed: int, kind: str = "generic", max_tries: int = 50):
    """Seeded search for a net whose discriminant is smooth; returns (net, x0, certificate, tries)."""
    rng = random.Random(seed)
    make = {"generic": random_net33, "has_line": has_line_net33, "twisted": twisted_net33}[kind]
    for t in range(1, max_tries + 1):
        net, x0 = make(F, rng)
        cert = net33_certificate(net, x0)
        if cert["smooth"] and (cert["has_line"] == (kind == "has_line")):
            return net, x0, cert, t
    raise RuntimeError("no smooth net found")


def random_net222(F, rng):
    while True:
        vs = [random_projective_point(F, 2, rng) for _ in range(3)]
        forms = []
        for a, b in ((0, 1), (0, 2), (1, 2)):
            forms.append(tuple(map(tuple, _force_zero(_random_matrix(F, rng, 3, 3), vs[a], vs[b], F))))
        if all(field_det(M, F) != 0 for M in forms):
            return Net222(F, *forms, *map(tuple, vs))


# ---------------------------------------------------------------------------
# JSON


def net33_to_json(net: BilinearNet33, x0: BasePoint33, certificate: dict | None = None, **extra) -> dict:
    F = net.field
    out = {"type": "33", "field": F.spec(),
           "matrices": [[[F.format(x) for x in row] for row in M] for M in net.mats],
           "base_point": {"v1": [F.format(x) for x in x0.v1], "v2": [F.format(x) for x in x0.v2]}}
    if certificate is not None:
        out["certificate"] = certificate
    out.update(extra)
    return out


def net33_from_json(data: dict):
    F = parse_field(data["field"])
    net = BilinearNet33(F, tuple(tuple(tuple(F(x) for x in row) for row in M) for M in data["matrices"]))
    bp = data["base_point"]
    return net, BasePoint33(tuple(F(x) for x in bp["v1"]), tuple(F(x) for x in bp["v2"]))


def net222_to_json(net: Net222, **extra) -> dict:
    F = net.field
    fm = lambda M: [[F.format(x) for x in row] for row in M]   # noqa: E731
    out = {"type": "222", "field": F.spec(), "F12": fm(net.F12), "F13": fm(net.F13), "F23": fm(net.F23),
           "base_point": [[F.format(x) for x in v] for v in (net.v1, net.v2, net.v3)]}
    out.update(extra)
    return out


def net222_from_json(data: dict) -> Net222:
    F = parse_field(data["field"])
    v = data["base_point"]
    return Net222(F, data["F12"], data["F13"], data["F23"], *[tuple(F(x) for x in w) for w in v])


def _solve_entries(F, rng, n, conditions):
    """Random n x n matrix M with x^T M y = 0 for every (x, y) in conditions."""
    rows = [[x[i] * y[j] for i in range(n) for j in range(n)] for x, y in conditions]
    basis = kernel(rows, F, n * n)
    flat = [F.zero] * (n * n)
    for b in basis:
        c = F.random_element(rng)
        flat = [s + c * t for s, t in zip(flat, b)]
    return [flat[i * n:(i + 1) * n] for i in range(n)]


def singular_net33(F, rng):
    """Net whose discriminant is singular at (1:0:0): a_1 has kernel pair (u, w) on X."""
    while True:
        v1, v2 = random_projective_point(F, 3, rng), random_projective_point(F, 3, rng)
        u, w = random_projective_point(F, 3, rng), random_projective_point(F, 3, rng)
        xs = kernel([u], F)        # x with u.x = 0
        ys = kernel([w], F)
        m1 = [[F.zero] * 4 for _ in range(4)]
        for x in xs:
            cs = [F.random_element(rng) for _ in ys]
            y = [sum((c * b[k] for c, b in zip(cs, ys)), F.zero) for k in range(4)]
            for i in range(4):
                for j in range(4):
                    m1[i][j] = m1[i][j] + x[i] * y[j]
        # u^T m1 = 0 and m1 w = 0
        if bilinear(m1, v1, v2, F) != 0:
            continue
        m2 = _solve_entries(F, rng, 4, [(v1, v2), (u, w)])
        m3 = _solve_entries(F, rng, 4, [(v1, v2), (u, w)])
        try:
            net = BilinearNet33(F, tuple(tuple(map(tuple, M)) for M in (m1, m2, m3)))
        except ValueError:
            continue
        if rank(net.mats[0], F) == 3:
            return net, BasePoint33(tuple(v1), tuple(v2)), (tuple(u), tuple(w))


def frobenius_swap(net: BilinearNet33, x0: BasePoint33, lam) -> dict:
    """For a twisted net over GF(p^2) and a prime-field point lam of the
    discriminant: Frobenius carries the point under component 1 to the point
    under component 2."""
    F = net.field
    comps = singular_fiber_components(net, x0, lam)
    if not isinstance(comps, list):
        return {"lam": tuple(lam), "status": comps, "swapped": None}
    c1, c2 = comps
    img = normalize_projective([F.frobenius(x) for x in c1.point])
    return {"lam": tuple(lam), "status": "ok", "swapped": tuple(img) == tuple(c2.point),
            "fixed": tuple(c1.point) == tuple(img)}


FIXTURES = ("net33_generic_1", "net33_generic_2", "net33_generic_3", "net33_has_line", "net33_twisted",
            "net33_small", "net33_singular", "net222_generic_1", "net222_generic_2")


def fixture_json(name: str) -> dict:
    import json
    from importlib.resources import files
    return json.loads(files("fanorat").joinpath("data", f"{name}.json").read_text())


def load_fixture(name: str):
    """(net, x0) for type (3,3) fixtures, a Net222 for type (2,2,2)."""
    data = fixture_json(name)
    return net222_from_json(data) if data["type"] == "222" else net33_from_json(data)
