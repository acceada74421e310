import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from netlimit.directions import (
    LeftAt,
    Naturals,
    PartitionsOf,
    RightAt,
    ToInfinity,
    ToMinusInfinity,
    TwoSidedAt,
    make_direction,
    mesh,
    parse_dirspec,
    riemann_stieltjes_net,
)
from netlimit.errors import DomainError, EvaluationError, ParamError


class TestMakeDirection:
    def test_left(self):
        d = make_direction("left", x0=1, h=0.5)
        assert isinstance(d, LeftAt)
        assert d.contains(-1e9) and d.contains(0.999) and not d.contains(1.0)

    def test_partitions(self):
        d = make_direction("partitions", a=0, b=1)
        assert isinstance(d, PartitionsOf)
        assert d.precedes((0.0, 1.0), (0.0, 0.5, 1.0))
        assert not d.precedes((0.0, 0.5, 1.0), (0.0, 0.1, 1.0))

    def test_infinity_growth_must_exceed_one(self):
        with pytest.raises(ParamError) as info:
            make_direction("inf", start=1, growth=1)
        assert info.value.field == "growth"

    def test_unknown_kind(self):
        with pytest.raises(ParamError):
            make_direction("sideways")

    def test_unknown_param(self):
        with pytest.raises(ParamError):
            make_direction("left", x0=0, colour="red")

    @pytest.mark.parametrize("kwargs, field", [
        (dict(kind="left", x0=math.nan), "x0"),
        (dict(kind="right", x0=0, h=0), "h"),
        (dict(kind="both", x0=0, ratio=1.0), "ratio"),
        (dict(kind="inf", start=-1), "start"),
        (dict(kind="-inf", start=1), "start"),
        (dict(kind="seq", growth=0.5), "growth"),
        (dict(kind="riemann", a=1, b=1), "b"),
        (dict(kind="riemann", a=0, b=1, tag="centre"), "tag"),
    ])
    def test_param_errors_name_field(self, kwargs, field):
        kind = kwargs.pop("kind")
        with pytest.raises(ParamError) as info:
            make_direction(kind, **kwargs)
        assert info.value.field == field


class TestDirspec:
    @pytest.mark.parametrize("text, cls", [
        ("left:1", LeftAt), ("right:-2.5", RightAt), ("both:0", TwoSidedAt), ("inf", ToInfinity),
        ("-inf", ToMinusInfinity), ("seq", Naturals), ("riemann:0:1", PartitionsOf),
    ])
    def test_kinds(self, text, cls):
        d = parse_dirspec(text)
        assert isinstance(d, cls)
        assert parse_dirspec(d.spec()).spec() == d.spec()

    @pytest.mark.parametrize("text", ["left", "left:x", "riemann:0", "inf:3", "up:1", "both:inf"])
    def test_malformed(self, text):
        with pytest.raises(ParamError):
            parse_dirspec(text)


class TestDomains:
    def test_point_directions_exclude_x0(self):
        assert not RightAt(0.0).contains(0.0)
        assert not TwoSidedAt(2.0).contains(2.0)
        assert TwoSidedAt(2.0).contains(1.5) and TwoSidedAt(2.0).contains(2.5)

    def test_two_sided_orders_by_distance(self):
        d = TwoSidedAt(0.0)
        assert d.precedes(0.5, -0.25) and d.precedes(-0.5, 0.5) and d.precedes(0.5, -0.5)

    def test_naturals_are_positive_integers(self):
        d = Naturals()
        assert d.contains(3) and not d.contains(0) and not d.contains(2.5)

    def test_precedes_checks_domain(self):
        with pytest.raises(DomainError):
            ToInfinity().precedes(math.nan, 2.0)

    def test_partitions_must_span_interval(self):
        d = PartitionsOf(0, 1)
        assert not d.contains((0.0, 0.5))
        assert not d.contains((0.0, 0.7, 0.5, 1.0))
        assert not d.contains([0.0, 1.0])


class TestPartitions:
    def test_mesh(self):
        assert mesh((0.0, 0.3, 1.0)) == 0.7

    def test_join_refines_both(self):
        d = PartitionsOf(0, 1)
        rng = np.random.default_rng(5)
        for _ in range(100):
            p, q = d.random_point(rng), d.random_point(rng)
            r = d.join(p, q)
            assert set(p) <= set(r) and set(q) <= set(r)
            assert mesh(r) <= min(mesh(p), mesh(q))

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (-1.0, 2.0), (2.0, 5.0), (0.1, 0.3)])
    def test_chain_halves_mesh(self, a, b):
        chain = PartitionsOf(a, b).chain(15)
        meshes = [mesh(p) for p in chain]
        for m0, m1 in zip(meshes, meshes[1:]):
            assert m1 == pytest.approx(m0 / 2, rel=1e-12, abs=8 * np.finfo(float).eps * (b - a))

    def test_chain_respects_max_cells(self):
        chain = PartitionsOf(0, 1, max_cells=64).chain(100)
        assert len(chain) == 7 and len(chain[-1]) == 65

    def test_tags(self):
        p = (0.0, 0.5, 1.0)
        assert PartitionsOf(0, 1, tag="left").tags(p).tolist() == [0.0, 0.5]
        assert PartitionsOf(0, 1, tag="right").tags(p).tolist() == [0.5, 1.0]
        assert PartitionsOf(0, 1).tags(p).tolist() == [0.25, 0.75]


class TestRiemannStieltjes:
    def test_two_cell_midpoint(self):
        d = PartitionsOf(0, 1)
        s = riemann_stieltjes_net(lambda x: x, lambda x: x, d)
        assert s(d.uniform(2)) == 0.5

    @settings(max_examples=100, deadline=None)
    @given(c=st.floats(-1e3, 1e3, allow_nan=False), a=st.floats(-10, 10), width=st.floats(0.01, 10),
           seed=st.integers(0, 2 ** 16))
    def test_constant_telescopes(self, c, a, width, seed):
        d = PartitionsOf(a, a + width)
        p = d.random_point(np.random.default_rng(seed))
        s = riemann_stieltjes_net(lambda x: c, lambda x: x, d)(p)
        assert s == pytest.approx(c * (d.b - d.a), rel=1e-12, abs=1e-300)

    def test_square_converges_to_brute_force(self):
        d = PartitionsOf(0, 1)
        s = riemann_stieltjes_net(lambda x: x * x, lambda x: x, d)
        fine = np.linspace(0, 1, 2 ** 18 + 1)
        mid = 0.5 * (fine[:-1] + fine[1:])
        oracle = float(np.sum(mid ** 2 * np.diff(fine)))
        assert oracle == pytest.approx(1 / 3, abs=1e-10)
        assert s(d.uniform(2 ** 12)) == pytest.approx(oracle, abs=1e-7)

    def test_stieltjes_integrator(self):
        # int_0^1 x d(x^2) = 2/3
        d = PartitionsOf(0, 1)
        s = riemann_stieltjes_net(lambda x: x, lambda x: x * x, d)
        assert s(d.uniform(4096)) == pytest.approx(2 / 3, abs=1e-7)

    def test_left_and_right_tags_bracket_increasing_integrand(self):
        left = riemann_stieltjes_net(np.exp, lambda x: x, PartitionsOf(0, 1, tag="left"))
        right = riemann_stieltjes_net(np.exp, lambda x: x, PartitionsOf(0, 1, tag="right"))
        p = PartitionsOf(0, 1).uniform(64)
        assert left(p) < math.e - 1 < right(p)

    def test_nonfinite_integrand_raises(self):
        s = riemann_stieltjes_net(lambda x: 1 / x, lambda x: x, PartitionsOf(0, 1, tag="left"))
        with pytest.raises(EvaluationError):
            s((0.0, 0.5, 1.0))
