import itertools
import random

import pytest

from fanorat.chow_blowup import BasisMismatch, DivClass
from fanorat.exact_algebra import GF, IntMatrix
from fanorat.toric_link import (INDETERMINATE, CenterError, LinkConfig, SourcePoint, canonical_class_check,
                                class_backward, class_forward, classify_stratum, descent_certificate,
                                divisor_class_map, exceptional_forward, point_forward, random_direction,
                                random_source_point, source_class, stratum_census, target_class,
                                unpack_fiber)

from oracles import multilinear_component


def all_configs(max_r=4, max_n=4):
    for r in range(2, max_r + 1):
        for dims in itertools.product(range(1, max_n + 1), repeat=r):
            p = sum(1 for n in dims if n >= 2)
            if all(n == 1 for n in dims[p:]):
                yield dims


def test_config_count_is_nonempty():
    assert len(list(all_configs())) > 100


@pytest.mark.parametrize("dims", list(all_configs()))
def test_forward_backward_inverse(dims):
    cmap = divisor_class_map(dims)
    r = len(dims)
    assert cmap.forward @ cmap.backward == IntMatrix.identity(r + 1)
    assert cmap.backward @ cmap.forward == IntMatrix.identity(r + 1)
    assert abs(cmap.forward.det()) == 1
    for k in range(r + 1):
        c = DivClass(cmap.source, tuple(1 if i == k else 0 for i in range(r + 1)))
        assert class_backward(class_forward(c, dims), dims) == c


def test_class_examples():
    assert class_forward(source_class((3, 3), [1, 1], -1), (3, 3)) == target_class((3, 3), [0, 0], 1)
    img = class_forward(source_class((1, 1, 1, 1), [1, 1, 1, 1], -1), (1, 1, 1, 1))
    assert img == target_class((1, 1, 1, 1), [-2] * 4, 3)
    assert class_forward(source_class((3, 2, 1), [0, 0, 0], 1), (3, 2, 1)) == target_class((3, 2, 1), [-1] * 3, 1)


def test_basis_mismatch():
    with pytest.raises(BasisMismatch):
        class_forward(target_class((2, 2), [1, 0], 0), (2, 2))
    with pytest.raises(BasisMismatch):
        class_backward(source_class((2, 2), [1, 0], 0), (2, 2))


@pytest.mark.parametrize("dims", [(3, 2), (2, 3), (1, 1, 1, 1), (2, 2), (2, 2, 2), (3, 3), (4, 4), (3, 1, 1)])
def test_canonical_classes(dims):
    assert canonical_class_check(dims)


@pytest.mark.parametrize("dims", [(3, 3), (2, 2, 2), (1, 1, 1, 1), (2, 1, 1), (4, 4)])
def test_descent_certificate(dims):
    assert all(row["ok"] for row in descent_certificate(dims))


@pytest.mark.parametrize("p", [5, 7])
@pytest.mark.parametrize("dims", [(3, 3), (2, 2, 2), (1, 1, 1, 1), (4, 4), (2, 2), (3, 2), (2, 3)])
def test_stratum_census(dims, p):
    cfg = LinkConfig.standard(dims, GF(p))
    c = stratum_census(cfg, random.Random(1000 + p), 100)
    assert c["open"] >= 100
    assert c["violations"] == [] and c["collisions"] == 0


def test_point_forward_matches_tensor_oracle():
    F = GF(5)
    cfg = LinkConfig(dims=(2, 2, 2), field=F, base=((1, 2, 0), (0, 1, 3), (2, 4, 1)))
    rng = random.Random(7)
    for _ in range(50):
        x = random_source_point(cfg, rng)
        img = point_forward(x, cfg)
        comps = [multilinear_component(cfg, x.coords, I) for I in cfg.summands()]
        flat = [c for comp in comps for c in comp]
        piv = next(k for k, c in enumerate(flat) if c != 0)
        flat = tuple(c / flat[piv] for c in flat)
        assert img.fiber == flat


def test_center_and_indeterminacy():
    F = GF(5)
    cfg = LinkConfig.standard((2, 1), F)
    with pytest.raises(CenterError):
        point_forward(SourcePoint("Y", cfg.base), cfg)
    rng = random.Random(2)
    x = random_source_point(cfg, rng, zero_set=(0,))
    assert point_forward(x, cfg) == INDETERMINATE


def test_section_stratum_maps_to_exceptional_divisor():
    F = GF(7)
    for dims in [(1, 1, 1, 1), (3, 1), (2, 2, 1)]:
        cfg = LinkConfig.standard(dims, F)
        rng = random.Random(3)
        j = cfg.p
        x = random_source_point(cfg, rng, zero_set=(j,))
        assert classify_stratum(x, "source", cfg).subset == (j,)
        lab = classify_stratum(point_forward(x, cfg), "target", cfg)
        assert lab.kind == "Ei" and lab.index == j


def test_exceptional_forward_generic_and_zero_factor():
    F = GF(7)
    cfg = LinkConfig.standard((2, 2, 2), F)
    rng = random.Random(4)
    d = random_direction(cfg, rng)
    lab = classify_stratum(exceptional_forward(d, cfg), "target", cfg)
    assert lab.kind == "YJ" and lab.subset == ()
    d = random_direction(cfg, rng, zero_set=(0,))
    img = exceptional_forward(d, cfg)
    comps = unpack_fiber(cfg, img.fiber)
    nonzero = [I for I, t in comps.items() if any(x != 0 for x in t)]
    assert nonzero == [(1, 2)]
    with pytest.raises(ValueError):
        exceptional_forward([(0, 0), (0, 0), (0, 0)], cfg)


def test_exceptional_forward_two_factors():
    F = GF(5)
    cfg = LinkConfig.standard((2, 2), F)
    u1, u2 = (F(1), F(3)), (F(2), F(4))
    img = exceptional_forward([u1, u2], cfg)
    comps = unpack_fiber(cfg, img.fiber)
    assert all(x == 0 for x in comps[(0, 1)])
    # summand I = {2} receives ubar_2, I = {1} receives ubar_1, jointly normalized
    raw = list(u2) + list(u1)
    scale = raw[0]
    assert list(comps[(1,)]) + list(comps[(0,)]) == [x / scale for x in raw]


def test_open_source_label():
    F = GF(5)
    cfg = LinkConfig.standard((3, 3), F)
    x = random_source_point(cfg, random.Random(0))
    assert classify_stratum(x, "source", cfg).subset == ()
    assert str(classify_stratum(point_forward(x, cfg), "target", cfg)) == "(Y~+)°"


def test_config_validation():
    F = GF(5)
    with pytest.raises(ValueError):
        LinkConfig.standard((1, 2), F)
    with pytest.raises(ValueError):
        LinkConfig(dims=(2, 2), field=F, base=((0, 0, 0), (1, 0, 0)))
