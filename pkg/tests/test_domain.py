import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from learnability import (
    NULL,
    Atom,
    affine_model,
    cardinality,
    enumerate_points,
    extend_dimension,
    fibers,
    lookup_table_model,
    make_domain,
)
from learnability.domain import canonical, value_key
from learnability.errors import (
    BudgetExceededError,
    DomainMismatchError,
    InvalidDomainError,
    InvalidExtensionError,
)


class TestMakeDomain:
    def test_cardinality_is_product(self):
        assert make_domain([3, 3]).cardinality == 9

    def test_ccd_sized_domain(self):
        # 200x200 pixels at 256 grey levels
        domain = make_domain([256] * 40000)
        assert domain.cardinality == 256**40000

    def test_single_point_is_degenerate(self):
        domain = make_domain([1])
        assert domain.cardinality == 1
        assert domain.is_degenerate

    @pytest.mark.parametrize("scales", [[], [0], [3, -1], [2, 0, 2]])
    def test_invalid_scales(self, scales):
        with pytest.raises(InvalidDomainError):
            make_domain(scales)

    def test_labels_must_match(self):
        with pytest.raises(InvalidDomainError):
            make_domain([2, 2], labels=["x"])


class TestCardinality:
    @pytest.mark.parametrize(
        "scales, exact, log10",
        [([3, 3], 9, math.log10(9)), ([2], 2, math.log10(2))],
    )
    def test_small(self, scales, exact, log10):
        n, lg = cardinality(make_domain(scales))
        assert n == exact
        assert lg == pytest.approx(log10, abs=1e-12)

    def test_huge_log_matches_closed_form(self):
        n, lg = cardinality(make_domain([256] * 40000))
        assert n == 256**40000
        assert lg == pytest.approx(40000 * math.log10(256), rel=1e-12)
        assert round(lg, 1) == 96329.6


class TestEnumerate:
    def test_lexicographic(self):
        assert list(enumerate_points(make_domain([2, 2]), budget=10)) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_one_dimensional(self):
        assert list(enumerate_points(make_domain([3]), budget=3)) == [(0,), (1,), (2,)]

    def test_budget(self):
        with pytest.raises(BudgetExceededError):
            enumerate_points(make_domain([256] * 40000), budget=10**6)

    @given(st.lists(st.integers(1, 4), min_size=1, max_size=4))
    def test_deterministic_and_complete(self, scales):
        domain = make_domain(scales)
        first, second = list(domain.points()), list(domain.points())
        assert first == second == sorted(first)
        assert len(set(first)) == domain.cardinality
        assert all(p in domain for p in first)


class TestExtend:
    def test_grow(self):
        assert extend_dimension(make_domain([3, 3]), 0, 4).scales == (4, 3)

    def test_identity(self):
        assert extend_dimension(make_domain([3, 3]), 1, 3) == make_domain([3, 3])

    def test_shrink_rejected(self):
        with pytest.raises(InvalidExtensionError):
            extend_dimension(make_domain([3, 3]), 0, 2)

    def test_bad_dimension(self):
        with pytest.raises(InvalidExtensionError):
            extend_dimension(make_domain([3, 3]), 2, 5)

    @given(st.lists(st.integers(1, 4), min_size=1, max_size=3), st.data())
    def test_monotone(self, scales, data):
        domain = make_domain(scales)
        dim = data.draw(st.integers(0, len(scales) - 1))
        bigger = domain.extend(dim, scales[dim] + data.draw(st.integers(0, 3)))
        assert all(p in bigger for p in domain.points())


class TestValues:
    def test_integral_fraction_collapses(self):
        assert canonical(Fraction(4, 2)) == 2
        assert type(canonical(Fraction(4, 2))) is int

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            canonical(0.5)

    def test_pair(self):
        assert canonical((Fraction(1, 1), Atom("cat"))) == (1, Atom("cat"))

    def test_total_order_across_kinds(self):
        values = [Atom("b"), (Fraction(1, 2), Atom("x")), 3, Fraction(1, 2), NULL]
        assert sorted(values, key=value_key) == [Fraction(1, 2), 3, NULL, Atom("b"), (Fraction(1, 2), Atom("x"))]


class TestFibers:
    def test_parity(self):
        domain = make_domain([4])
        mod2 = lookup_table_model(domain, {(x,): x % 2 for x in range(4)})
        gens = fibers(mod2, domain.points())
        assert [(g.representation, g.fiber, g.invariant) for g in gens] == [
            (0, frozenset({(0,), (2,)}), True),
            (1, frozenset({(1,), (3,)}), True),
        ]

    def test_injective_gives_singletons(self):
        domain = make_domain([3])
        gens = fibers(affine_model(domain, [2]), domain.points())
        assert [g.representation for g in gens] == [0, 2, 4]
        assert not any(g.invariant for g in gens)

    def test_empty_subset(self):
        assert fibers(affine_model(make_domain([3]), [2]), []) == []

    def test_outside_point(self):
        with pytest.raises(DomainMismatchError):
            fibers(affine_model(make_domain([3]), [2]), [(3,)])

    @given(
        st.lists(st.integers(1, 3), min_size=1, max_size=3),
        st.lists(st.integers(0, 3), min_size=81, max_size=81),
        st.data(),
    )
    def test_partition_property(self, scales, values, data):
        domain = make_domain(scales)
        points = list(domain.points())
        model = lookup_table_model(domain, {p: values[i] for i, p in enumerate(points)})
        subset = data.draw(st.sets(st.sampled_from(points)))
        gens = fibers(model, subset)
        union = set()
        for g in gens:
            assert not (union & g.fiber)
            union |= g.fiber
            assert all(model(p) == g.representation for p in g.fiber)
            assert g.invariant == (len(g.fiber) >= 2)
        assert union == subset
        assert len(gens) == len({model(p) for p in subset})
