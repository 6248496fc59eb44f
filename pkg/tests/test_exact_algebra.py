import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from fanorat.exact_algebra import (GF, QQ, DimensionError, FieldSizeError, IntMatrix, MultiPoly,
                                   enumerate_field, evaluate, field_det, find_modulus, invariant_factors,
                                   is_irreducible, kernel, matrix_from_json, matrix_to_json,
                                   normalize_projective, parse_field, partial_derivative, poly_det,
                                   poly_from_json, poly_to_json, projective_points, rank,
                                   smith_normal_form)

from oracles import invariant_factors_sympy, sympy_det_matrix, to_sympy

XY = (("x", 1), ("y", 1))
L3 = (("l", 3),)


def var(blocks, name, field=QQ):
    return MultiPoly.variable(blocks, name, field)


# fields

def test_enumerate_field_sizes():
    assert {e.code for e in enumerate_field(2, 1)} == {0, 1}
    assert len(list(enumerate_field(3, 2))) == 9
    assert len(set(enumerate_field(101, 1))) == 101


def test_field_size_bound():
    with pytest.raises(FieldSizeError):
        GF(2, 30)


@pytest.mark.parametrize("p,d", [(2, 3), (3, 2), (5, 2), (7, 2), (5, 3), (3, 4)])
def test_modulus_irreducible_and_primitive(p, d):
    F = GF(p, d)
    assert is_irreducible(F.modulus, p)
    g = F.generator()
    seen = set()
    x = F.one
    for _ in range(F.q - 1):
        seen.add(x.code)
        x = x * g
    assert len(seen) == F.q - 1 and x == F.one


def test_reducible_detected():
    # x^2 + 1 = (x + 2)(x + 3) over F_5
    assert not is_irreducible((1, 0, 1), 5)
    assert find_modulus(5, 2) != (1, 0, 1)


@pytest.mark.parametrize("p,d", [(3, 2), (5, 2), (2, 3), (7, 1)])
def test_field_axioms_exhaustive(p, d):
    F = GF(p, d)
    els = list(F.elements())
    rng = random.Random(0)
    for _ in range(300):
        a, b, c = (rng.choice(els) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a - a == F.zero
        if a != 0:
            assert a * a.inverse() == F.one
            assert (b / a) * a == b


def test_frobenius_is_automorphism_fixing_prime_field():
    F = GF(7, 2)
    els = list(F.elements())
    fixed = [x for x in els if F.frobenius(x) == x]
    assert len(fixed) == 7 and all(F.in_prime_field(x) for x in fixed)
    rng = random.Random(1)
    for _ in range(100):
        a, b = rng.choice(els), rng.choice(els)
        assert F.frobenius(a * b) == F.frobenius(a) * F.frobenius(b)
        assert F.frobenius(a + b) == F.frobenius(a) + F.frobenius(b)
        assert F.frobenius(a, 2) == a


def test_parse_and_format_round_trip():
    for spec in ("Q", "5", "7^2", "3^3"):
        F = parse_field(spec)
        assert F.spec() == spec
        if F.order:
            for x in F.elements():
                assert F.parse(F.format(x)) == x
    assert QQ("-3/4") == Fraction(-3, 4)


def test_projective_points_count_and_normalization():
    F = GF(5)
    pts = list(projective_points(F, 2))
    assert len(pts) == 25 + 5 + 1
    assert len({tuple(p) for p in pts}) == len(pts)
    for p in pts:
        assert tuple(p) == normalize_projective(p)
    with pytest.raises(ValueError):
        normalize_projective([F.zero, F.zero])


# polynomials

def test_det_small_cases():
    x, y = var(XY, "x"), var(XY, "y")
    assert poly_det([[x]]) == x
    assert poly_det([[x, y], [-y, x]]) == x * x + y * y


def test_det_dimension_error():
    x = var(XY, "x")
    with pytest.raises(DimensionError):
        poly_det([[x, x]])
    with pytest.raises(DimensionError):
        poly_det([[x, x], [x, var(L3, ("l", 0))]])


def test_partial_derivatives():
    l1 = var(L3, ("l", 0))
    f = l1 ** 4
    assert partial_derivative(f, ("l", 0)) == 4 * l1 ** 3
    assert partial_derivative(f, ("l", 1)).is_zero()
    with pytest.raises((KeyError, ValueError, IndexError)):
        partial_derivative(f, "zz")


def test_evaluate():
    x, y = var(XY, "x"), var(XY, "y")
    assert evaluate(x * x + y * y, [1, 2]) == 5
    assert evaluate(x * x * y + y ** 3, [0, 0]) == 0
    with pytest.raises(DimensionError):
        evaluate(x, [1])


def test_x0_form_vanishes_at_y0():
    blocks = tuple((f"{c}{i}", 1) for i in range(1, 5) for c in "uv")
    u = [var(blocks, f"u{i}") for i in range(1, 5)]
    v = [var(blocks, f"v{i}") for i in range(1, 5)]
    f = u[0] * u[1] * u[2] * u[3] - v[0] * v[1] * v[2] * v[3]
    assert evaluate(f, [1] * 8) == 0


def _random_poly(rng, blocks, field, nterms=4, maxdeg=2):
    n = sum(s for _, s in blocks)
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(n))
        terms[e] = field(rng.randint(-5, 5))
    return MultiPoly(blocks, terms, field)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    for F in (QQ, GF(7), GF(3, 2)):
        f, g, h = (_random_poly(rng, XY, F) for _ in range(3))
        assert (f + g) * h == f * h + g * h
        assert f * g == g * f
        assert (f - f).is_zero()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_det_agrees_with_sympy(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    m = [[_random_poly(rng, XY, QQ, nterms=2, maxdeg=1) for _ in range(n)] for _ in range(n)]
    ours, syms = to_sympy(poly_det(m))
    ref, _ = sympy_det_matrix(m)
    assert sympy.expand(ours - ref) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_det_alternating_and_block_multiplicative(seed):
    rng = random.Random(seed)
    F = GF(101)
    A = [[_random_poly(rng, XY, F, 2, 1) for _ in range(2)] for _ in range(2)]
    B = [[_random_poly(rng, XY, F, 2, 1) for _ in range(2)] for _ in range(2)]
    C = [[_random_poly(rng, XY, F, 2, 1) for _ in range(2)] for _ in range(2)]
    Z = MultiPoly(XY, field=F)
    M = [A[0] + C[0], A[1] + C[1], [Z, Z] + B[0], [Z, Z] + B[1]]
    assert poly_det(M) == poly_det(A) * poly_det(B)
    swapped = [M[1], M[0], M[2], M[3]]
    assert poly_det(swapped) == -poly_det(M)


def test_det_evaluation_matches_numeric_determinant():
    rng = random.Random(5)
    F = GF(101)
    m = [[_random_poly(rng, L3, F, 3, 1) for _ in range(4)] for _ in range(4)]
    d = poly_det(m)
    for _ in range(100):
        pt = [F.random_element(rng) for _ in range(3)]
        assert d.evaluate(pt) == field_det([[e.evaluate(pt) for e in row] for row in m], F)


def test_json_round_trip():
    rng = random.Random(3)
    for F in (QQ, GF(7, 2)):
        f = _random_poly(rng, L3, F, 5, 3)
        assert poly_from_json(poly_to_json(f)) == f
    F = GF(7, 2)
    m = [[F.random_element(rng) for _ in range(3)] for _ in range(2)]
    assert matrix_from_json(matrix_to_json(m, F), F) == m


def test_kernel_and_rank():
    F = QQ
    rows = [[F(1), F(2), F(3)], [F(2), F(4), F(6)]]
    assert rank(rows, F) == 1
    ker = kernel(rows, F)
    assert len(ker) == 2
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in rows)


# integer normal forms

def test_snf_examples():
    D, U, V = smith_normal_form(IntMatrix([[2, 0], [0, 3]]))
    assert D.diagonal() == [1, 6]
    Z = IntMatrix.zeros(2, 3)
    D, U, V = smith_normal_form(Z)
    assert D.is_zero() and U == IntMatrix.identity(2) and V == IntMatrix.identity(3)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=3, max_size=3), min_size=1, max_size=5))
def test_snf_reconstruction(rows):
    m = IntMatrix(rows)
    D, U, V = smith_normal_form(m)
    assert U @ m @ V == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [abs(x) for x in D.diagonal()]
    nz = [x for x in diag if x]
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(D[i, j] == 0 for i in range(D.rows) for j in range(D.cols) if i != j)
    assert sorted(nz) == invariant_factors_sympy(rows)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-4, 4), min_size=4, max_size=4), min_size=1, max_size=7))
def test_sparse_invariant_factors_match_sympy(rows):
    sparse = [{c: v for c, v in enumerate(r) if v} for r in rows]
    assert sorted(abs(x) for x in invariant_factors(sparse, 4)) == invariant_factors_sympy(rows)
