import itertools
import random

import pytest

from fanorat.exact_algebra import GF, QQ, projective_points
from fanorat import toric_degeneration as td

LABELS = sorted(f"x_{p}{q}" for p, q in itertools.combinations(td.INDICES, 2))


def test_zero_weight_space_has_multiplicity_two():
    dec = td.weight_decomposition()
    sizes = sorted(len(v) for v in dec.values())
    assert sizes == [1] * 14 + [2]
    zero = dec[td.TorusWeight.of((0, 0, 0, 0))]
    assert set(zero) == {frozenset(td.INDICES), frozenset()}


def test_weights_match_direct_torus_action():
    # characters of monomials on random points of {t1 t2 t3 t4 = 1}; equal weight iff equal character
    F = GF(101)
    rng = random.Random(3)
    ts = []
    for _ in range(6):
        t = [F(rng.randint(1, 100)) for _ in range(3)]
        t.append((t[0] * t[1] * t[2]).inverse())
        ts.append(t)

    def character(s):
        out = []
        for t in ts:
            c = F.one
            for i in td.INDICES:
                if i not in s:
                    c = c * t[i - 1]
            out.append(c)
        return tuple(out)

    for a, b in itertools.combinations(td.SUBSETS, 2):
        assert (character(a) == character(b)) == (td.monomial_weight(a) == td.monomial_weight(b))


def test_invariant_divisor_through_y0():
    f = td.invariant_divisor_through()
    assert f == td.x0_form()
    assert f.evaluate(td.Y0) == 0
    g = td.invariant_divisor_through(((1, 2), (1, 3), (1, 1), (1, 1)))
    assert g.evaluate(((1, 2), (1, 3), (1, 1), (1, 1))) == 0
    assert set(g.coeffs) == {frozenset(td.INDICES), frozenset()}
    assert td.monomials_through() == []
    with pytest.raises(ValueError):
        td.invariant_divisor_through(((0, 1), (1, 1), (1, 1), (1, 1)))


def test_six_ordinary_double_points():
    certs = td.singular_points()
    assert sorted(c.label for c in certs) == LABELS
    for c in certs:
        assert c.ok and c.quadratic_rank == 4
        assert all(x == 0 for x in td.gradient(td.x0_form(), c.point))


def test_local_equation_at_x34():
    names, g = td.local_equation(td.x0_form(), 3, 4)
    assert names == ("v1", "v2", "u3", "u4")
    assert g.terms == {(0, 0, 1, 1): 1, (1, 1, 0, 0): -1}


@pytest.mark.parametrize("p", [5, 7])
def test_singular_points_match_exhaustive_gradient_search(p):
    F = GF(p)
    form = td.x0_form(F)
    P1 = [tuple(x) for x in projective_points(F, 1)]
    sing = []
    for pt in itertools.product(P1, repeat=4):
        if form.evaluate(pt) == 0 and all(x == 0 for x in td.gradient(form, pt)):
            sing.append(pt)
    assert sorted(td.label(pt) for pt in sing) == LABELS
    assert set(td.singular_scheme_points(form, F)) == set(sing)


def test_orbit_curves_partition_the_singular_points():
    res = td.orbit_incidence_partition()
    assert res["all_on_x0"] and res["partition"]
    seen = []
    for c in res["curves"]:
        assert len(c.incidence) == 2
        seen.extend(c.incidence)
    assert sorted(seen) == LABELS
    c = td.orbit_curve(((1, 2), (3, 4)))
    assert c.incidence == frozenset({"x_12", "x_34"})
    with pytest.raises(ValueError):
        td.orbit_curve(((1, 2), (2, 3)))


def test_orbit_curves_pass_through_y0():
    for pat in td.KLEIN_PATTERNS:
        c = td.orbit_curve(pat)
        pt = tuple(tuple(x.evaluate([QQ(1), QQ(1)]) for x in uv) for uv in c.parametrization)
        assert pt == td.Y0


def test_probe_recovers_six_points_at_t0():
    F = GF(7)
    g = td.random_form_through_y0(F, random.Random(5))
    rows = td.pencil_smoothness_probe(g, 7, ts=[0], max_degree=2)
    assert rows[0].singular_points == {1: 6, 2: 6}


def test_probe_generic_members_smooth():
    F = GF(7)
    g = td.random_form_through_y0(F, random.Random(5))
    rows = td.pencil_smoothness_probe(g, 7, max_degree=1)
    smooth = [r for r in rows if r.smooth]
    assert len(rows) == 7 and not rows[0].smooth
    assert len(smooth) >= 4


def test_probe_degenerate_member():
    F = GF(7)
    rows = td.pencil_smoothness_probe(td.x0_form(F), 7, max_degree=1)
    assert [r.degenerate for r in rows] == [False] * 6 + [True]


def test_probe_rejects_form_off_y0():
    with pytest.raises(ValueError):
        td.pencil_smoothness_probe(td.QuadrilinearForm({frozenset(td.INDICES): 1}, GF(7)), 7)


def test_form_json_round_trip():
    g = td.random_form_through_y0(GF(7), random.Random(2))
    assert td.QuadrilinearForm.from_json(g.to_json()) == g
    assert g.evaluate(tuple((GF(7).one, GF(7).one) for _ in td.INDICES)) == 0
