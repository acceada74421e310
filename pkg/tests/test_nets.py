import math

import numpy as np
import pytest

from netlimit.directions import LeftAt, Naturals, PartitionsOf, RightAt, ToInfinity, ToMinusInfinity, TwoSidedAt
from netlimit.errors import DomainError, EvaluationError
from netlimit.nets import (
    BudgetExhausted,
    Holds,
    Net,
    RefutedAt,
    Tail,
    cofinal_chain,
    common_anchor,
    join,
    ultimately_less,
)

ALL_DIRECTIONS = [
    LeftAt(1.0), RightAt(0.0), TwoSidedAt(0.0), LeftAt(-2.5), RightAt(3.0),
    ToInfinity(), ToMinusInfinity(), Naturals(), PartitionsOf(0.0, 1.0), PartitionsOf(-1.0, 2.0),
]


def _ids(d):
    return d.spec()


@pytest.fixture(params=ALL_DIRECTIONS, ids=_ids)
def direction(request):
    return request.param


class TestDirectionInvariants:
    """Preorder and directedness on random samples."""

    def test_reflexive(self, direction):
        rng = np.random.default_rng(0)
        for _ in range(100):
            x = direction.random_point(rng)
            assert direction.precedes(x, x)

    def test_transitive(self, direction):
        rng = np.random.default_rng(1)
        for _ in range(100):
            x, y, z = (direction.random_point(rng) for _ in range(3))
            if direction.precedes(x, y) and direction.precedes(y, z):
                assert direction.precedes(x, z)

    def test_join_dominates(self, direction):
        rng = np.random.default_rng(2)
        for _ in range(100):
            x, y = direction.random_point(rng), direction.random_point(rng)
            z = join(direction, x, y)
            assert direction.contains(z)
            assert direction.precedes(x, z) and direction.precedes(y, z)

    def test_chain_is_increasing(self, direction):
        for ratio in (None, 0.5, 0.3, 0.9):
            chain = cofinal_chain(direction, 40, ratio)
            assert len(chain) >= 2
            for a, b in zip(chain, chain[1:]):
                assert direction.precedes(a, b) and not direction.precedes(b, a)

    def test_chain_points_in_domain(self, direction):
        assert all(direction.contains(x) for x in cofinal_chain(direction, 60))

    def test_segment_starts_at_left_end_and_stays_between(self, direction):
        a, b = cofinal_chain(direction, 6)[4:6]
        seg = direction.segment(a, b, 16)
        assert seg[0] == a
        for p in seg:
            assert direction.precedes(a, p) and direction.precedes(p, b)

    def test_progress_shrinks(self, direction):
        chain = cofinal_chain(direction, 30)
        prog = [direction.progress(x) for x in chain]
        assert all(p >= 0 for p in prog)
        assert all(q <= p for p, q in zip(prog, prog[1:]))
        assert prog[-1] < prog[0]


class TestChains:
    def test_left_examples(self):
        assert cofinal_chain(LeftAt(1.0, h=0.5), 3, 0.5) == [0.5, 0.75, 0.875]

    def test_infinity_example(self):
        assert cofinal_chain(ToInfinity(start=1, growth=2), 3) == [1, 2, 4]

    def test_naturals_unit_growth(self):
        assert cofinal_chain(Naturals(growth=1), 3) == [1, 2, 3]

    def test_naturals_default_is_geometric(self):
        assert cofinal_chain(Naturals(), 5) == [1, 2, 4, 8, 16]

    def test_horizon_truncates(self):
        chain = cofinal_chain(LeftAt(1.0), 10_000)
        assert len(chain) < 10_000
        assert 1.0 - chain[-1] > 0

    def test_naturals_reach_two_to_twenty(self):
        assert cofinal_chain(Naturals(), 100)[-1] == 2 ** 20

    def test_bad_count(self):
        with pytest.raises(ValueError):
            cofinal_chain(LeftAt(0.0), 0)


class TestJoin:
    def test_left_join_is_max(self):
        assert join(LeftAt(1.0), 0.5, 0.9) == 0.9

    def test_infinity_join_is_max(self):
        assert join(ToInfinity(), 3, 7) == 7

    def test_partition_join_is_union(self):
        assert join(PartitionsOf(0, 1), (0, 0.5, 1), (0, 0.3, 1)) == (0, 0.3, 0.5, 1)

    def test_two_sided_prefers_closer_then_positive(self):
        d = TwoSidedAt(0.0)
        assert join(d, 0.3, -0.1) == -0.1
        assert join(d, -0.2, 0.2) == 0.2

    def test_join_rejects_outside_points(self):
        with pytest.raises(DomainError):
            join(LeftAt(1.0), 0.5, 1.5)

    def test_common_anchor_of_nets(self):
        d = LeftAt(1.0)
        f, g = Net(lambda x: x, 0.2), Net(lambda x: x, 0.6)
        assert common_anchor(d, f, g, Net(lambda x: x)) == 0.6
        assert common_anchor(d, Net(abs)) is None

    def test_tail_membership(self):
        t = LeftAt(1.0).tail(0.5)
        assert isinstance(t, Tail)
        assert 0.7 in t and 0.4 not in t and 1.2 not in t


class TestUltimatelyLess:
    def test_holds_on_whole_domain(self):
        v = ultimately_less(lambda x: x, lambda x: 2.0 + 0 * x, LeftAt(1.0))
        assert isinstance(v, Holds) and v

    def test_strict_ties_refuted(self):
        five = lambda x: 5.0 + 0 * x
        assert isinstance(ultimately_less(five, five, LeftAt(0.0)), RefutedAt)

    def test_non_strict_ties_hold(self):
        five = lambda x: 5.0 + 0 * x
        assert isinstance(ultimately_less(five, five, LeftAt(0.0), strict=False), Holds)

    def test_sin_reciprocal_refuted(self):
        v = ultimately_less(lambda x: np.sin(1 / x), lambda x: 0.5 + 0 * x, RightAt(0.0))
        assert isinstance(v, RefutedAt)
        assert math.sin(1 / v.point) >= 0.5

    def test_eventual_inequality_found_after_crossing(self):
        # x^2 < x only once x < 1 ... approaching 0 from the right
        v = ultimately_less(lambda x: x * x, lambda x: x, RightAt(0.0, h=4.0))
        assert isinstance(v, Holds)
        assert v.anchor < 1.0

    def test_too_short_chain_is_inconclusive(self):
        v = ultimately_less(lambda x: x, lambda x: 2.0 + 0 * x, LeftAt(1.0), budget=2)
        assert isinstance(v, BudgetExhausted) and not v

    def test_nan_raises(self):
        with pytest.raises(EvaluationError):
            ultimately_less(lambda x: np.nan * x, lambda x: x, LeftAt(1.0))

    @pytest.mark.parametrize("direction", [LeftAt(1.0), RightAt(0.0), TwoSidedAt(0.0), ToInfinity(),
                                           ToMinusInfinity(), Naturals()], ids=_ids)
    def test_holds_survives_denser_verification(self, direction):
        def f(x):
            return 1.0 - direction.progress(x) if np.ndim(x) == 0 else \
                np.array([1.0 - direction.progress(p) for p in x])

        g = lambda x: 1.0 + 0 * np.asarray(x, dtype=float)
        v = ultimately_less(f, g, direction, budget=30, density=8)
        assert isinstance(v, Holds)
        chain = [p for p in cofinal_chain(direction, 30) if direction.precedes(v.anchor, p)]
        dense = [q for a, b in zip(chain, chain[1:]) for q in direction.segment(a, b, 80)]
        assert all(f(q) < g(q) for q in dense)
