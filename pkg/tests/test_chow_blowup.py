import warnings

import pytest
from hypothesis import given, strategies as st

from fanorat.chow_blowup import (P3_SEXTIC_GENUS3, QUADRIC_QUARTIC, BasisMismatch, BlowupTriple, DegreeMismatch,
                                 DivClass, ProductChowRing, anticanonical_class, ci_anticanonical_degree,
                                 cube_on_blowup, curve_blowup_products, fano_index, hhe_products,
                                 top_intersection, x44_link_numerology, _mixed_cube)

from oracles import top_intersection_sympy

CI_ROWS = {
    "(3,3)": ((3, 3), [(1, 1)] * 3, 20, 11),
    "(1,1,1,1)": ((1, 1, 1, 1), [(1, 1, 1, 1)], 24, 13),
    "(2,2,2)": ((2, 2, 2), [(0, 1, 1), (1, 0, 1), (1, 1, 0)], 30, 16),
    "(2,2)": ((2, 2), [(1, 1)], 48, 25),
    "(1,1,1)": ((1, 1, 1), [], 48, 25),
}


@pytest.mark.parametrize("name", CI_ROWS)
def test_table_degrees(name):
    dims, divs, deg, genus = CI_ROWS[name]
    assert ci_anticanonical_degree(dims, divs) == deg
    assert deg == 2 * genus - 2


@pytest.mark.parametrize("name", CI_ROWS)
def test_table_degrees_against_sympy(name):
    dims, divs, deg, _ = CI_ROWS[name]
    mk = anticanonical_class(dims, divs)
    assert top_intersection_sympy(dims, [mk] * 3 + list(divs)) == deg


def test_four_four_from_blowup_model():
    t = curve_blowup_products(*QUADRIC_QUARTIC[:3])
    assert t == BlowupTriple(54, 0, -12, -10)
    assert cube_on_blowup(t, 1, -1) == 28


def test_quadric_quartic_hyperplane_normalization():
    t = curve_blowup_products(*QUADRIC_QUARTIC[:3], index=QUADRIC_QUARTIC[3])
    assert cube_on_blowup(t, 2, -1) == 2
    assert cube_on_blowup(t, 3, -1) == 28


def test_p3_sextic():
    t = curve_blowup_products(*P3_SEXTIC_GENUS3[:3])
    assert t == BlowupTriple(64, 0, -24, -28)
    assert cube_on_blowup(t, 1, -1) == 20


def test_degenerate_curve_input():
    assert curve_blowup_products(54, 0, 0).E3 == 2


def test_indices():
    assert fano_index((3, 3), [(1, 1)] * 3) == 1
    assert fano_index((2, 2), [(1, 1)]) == 2
    assert fano_index((1, 1, 1), []) == 2
    assert fano_index((1, 1, 1, 1), [(1, 1, 1, 1)]) == 1


def test_point_class_and_truncation():
    ring = ProductChowRing((2, 1))
    assert top_intersection(ring, [(1, 0), (1, 0), (0, 1)]) == 1
    assert top_intersection(ring, [(0, 1), (0, 1), (1, 0)]) == 0
    with pytest.raises(DegreeMismatch):
        top_intersection(ring, [(1, 0)])
    with pytest.raises(DegreeMismatch):
        ci_anticanonical_degree((3, 3), [(1, 1)])


def test_nonpositive_minus_k_warns_but_returns():
    with pytest.warns(UserWarning):
        v = ci_anticanonical_degree((1, 1, 1, 1), [(2, 2, 2, 2)])
    assert isinstance(v, int)


def test_div_class_basis_guard():
    a = DivClass(("H1", "E"), (1, -1))
    b = DivClass(("h1", "h"), (1, 0))
    with pytest.raises(BasisMismatch):
        a + b
    assert str(a) == "H1 - E"
    assert (2 * a)["E"] == -2


@pytest.mark.parametrize("g,m,expected", [(15, 2, (28, 0, 0, 1)), (15, 1, (28, 0, -2, 0)), (11, 1, (20, 0, -2, 0))])
def test_hhe(g, m, expected):
    assert tuple(hhe_products(g, m)) == expected


def test_hhe_bad_m():
    with pytest.raises(ValueError):
        hhe_products(15, 3)


@given(st.integers(11, 16), st.sampled_from([1, 2]))
def test_hhe_cube_pattern(g, m):
    t = hhe_products(g, m)
    assert cube_on_blowup(t, 1, -m) == 2 * (g - m - 3)
    assert cube_on_blowup(t, 1, 0) == t.H3
    assert cube_on_blowup(t, 0, 1) == t.E3


@pytest.mark.parametrize("m", [1, 2])
def test_minus_k_e_products_at_genus_15(m):
    t = hhe_products(15, m)
    # (-K)^2.E = 4 and (-K).E^2 = -2 with -K = H - mE
    assert _mixed_cube(t, (1, -m), (0, 1)) == 4
    assert _mixed_cube(t, (0, 1), (1, -m)) == -2


@pytest.mark.parametrize("m,expected", [(2, (20, 10, 5, 4)), (1, (22, 12, 6, 6))])
def test_link_numerology(m, expected):
    r = x44_link_numerology(15, m)
    assert tuple(r[:4]) == expected and r.recomputed


def test_link_numerology_out_of_range_is_flagged():
    with pytest.warns(UserWarning):
        r = x44_link_numerology(15, 0)
    assert tuple(r[:4]) == (24, 14, 7, 8) and not r.recomputed
