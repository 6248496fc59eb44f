import itertools

import pytest

from fanorat.chow_blowup import ci_anticanonical_degree
from fanorat.galois_picard import (NOT_TRANSITIVE, FAMILIES, PermGroup, UnsupportedType, classify_transitive_s4,
                                   contains_klein, cyclic_group, fano_type, hilbert_component_counts,
                                   invariant_rank, lines_through_point_length, parse_cycles, recomputed_degree,
                                   standard_transitive_s4, subgroups_s4, symmetric_group, verdict)

G = PermGroup.from_cycles


def test_subgroup_count():
    subs = subgroups_s4()
    assert len(subs) == 30
    assert len(set(subs)) == 30
    assert sorted({g.order for g in subs}) == [1, 2, 3, 4, 6, 8, 12, 24]


def test_invariant_rank_examples():
    assert invariant_rank(PermGroup(4)) == 4
    assert invariant_rank(G(2, "(1 2)")) == 1
    assert invariant_rank(G(4, "(1 2)(3 4)", "(1 3)(2 4)")) == 1


def _orbit_count(g):
    # direct enumeration: classes of i ~ h(i)
    seen, count = set(), 0
    for i in range(g.degree):
        if i not in seen:
            count += 1
            seen |= {h[i] for h in g.elements}
    return count


def test_invariant_rank_is_orbit_count_and_transitivity():
    for g in subgroups_s4():
        assert invariant_rank(g) == _orbit_count(g)
        assert (invariant_rank(g) == 1) == g.is_transitive()


def test_classification_examples():
    assert classify_transitive_s4(G(4, "(1 2 3 4)")) == "C4"
    assert classify_transitive_s4(G(4, "(1 2)(3 4)", "(1 3)(2 4)")) == "V4"
    assert classify_transitive_s4(G(4, "(1 2)", "(1 3)")) == NOT_TRANSITIVE


def test_classification_census():
    labels = {}
    for g in subgroups_s4():
        lab = classify_transitive_s4(g)
        if lab != NOT_TRANSITIVE:
            labels.setdefault(lab, []).append(g)
    # conjugacy class sizes of transitive subgroups: S4 1, A4 1, D4 3, V4 1, C4 3
    assert {k: len(v) for k, v in labels.items()} == {"S4": 1, "A4": 1, "D4": 3, "V4": 1, "C4": 3}
    for lab, gs in labels.items():
        for g in gs:
            assert contains_klein(g) == (lab != "C4")


def test_classification_matches_conjugation_search():
    # independent check: transitive subgroups are conjugate iff they get the same label
    s4 = symmetric_group(4).elements

    def conj(g, s):
        inv = tuple(sorted(range(4), key=lambda i: s[i]))
        return frozenset(tuple(s[x[inv[i]]] for i in range(4)) for x in g.elements)

    trans = [g for g in subgroups_s4() if g.is_transitive()]
    for a, b in itertools.combinations(trans, 2):
        conjugate = any(conj(a, s) == frozenset(b.elements) for s in s4)
        assert conjugate == (classify_transitive_s4(a) == classify_transitive_s4(b))


def test_contains_klein_examples():
    named = standard_transitive_s4()
    assert contains_klein(G(4, "(1 2 3 4)", "(1 3)"))
    assert not contains_klein(named["C4"])
    assert contains_klein(named["V4"])


def test_permgroup_verification():
    with pytest.raises(ValueError):
        PermGroup(3, [(0, 0, 1)])
    assert parse_cycles("(1 2)(3 4)", 4) == (1, 0, 3, 2)
    assert cyclic_group(5).order == 5


def test_table_rows():
    expected = {(3, 3): (1, 2, 20, 11, 3), (1, 1, 1, 1): (1, 4, 24, 13, 1), (4, 4): (1, 2, 28, 15, 0),
                (2, 2, 2): (1, 3, 30, 16, 0), (2, 2): (2, 2, 48, 25, 0), (1, 1, 1): (2, 3, 48, 25, 0)}
    assert set(FAMILIES) == set(expected)
    for tag, row in expected.items():
        t = fano_type(tag)
        assert (t.index, t.rho, t.degree, t.genus, t.h12) == row
        assert t.degree == 2 * t.genus - 2
        assert recomputed_degree(t) == t.degree
        if tag != (4, 4):
            assert ci_anticanonical_degree(t.ambient, t.divisors) == t.degree


def _counts(tag):
    h = hilbert_component_counts(fano_type(tag))
    return h.lines_components, h.conics_components, h.cubics_through_point_components


def test_hilbert_counts():
    assert _counts((1, 1, 1, 1)) == (4, 6, 8)
    assert _counts((4, 4)) == (2, 1, 2)
    assert _counts((2, 2, 2)) == (3, 3, 1)
    with pytest.raises(UnsupportedType):
        hilbert_component_counts(fano_type((2, 2)))


def test_lines_through_point():
    assert lines_through_point_length(fano_type((3, 3)), True) == 2
    assert lines_through_point_length(fano_type((1, 1, 1, 1)), False) == 0
    assert lines_through_point_length(fano_type((2, 2, 2)), True) == 3
    with pytest.raises(UnsupportedType):
        lines_through_point_length(fano_type((1, 1, 1)), True)


def test_verdict_examples():
    assert verdict(fano_type((4, 4)), True).summary() == "rational"
    v = verdict(fano_type((3, 3)), True)
    assert v.unirational and v.rational == "no" and v.summary() == "unirational; not rational"
    v = verdict(fano_type((1, 1, 1, 1)), True)
    assert v.unirational and v.rational == "open"


def test_verdict_no_point_monotone():
    for tag in FAMILIES:
        v = verdict(fano_type(tag), False)
        assert not v.unirational and v.rational == "no"
        assert "theorem" not in v.reason.lower()
