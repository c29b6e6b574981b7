import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from learnability import (
    NULL,
    Box,
    Certificate,
    Overall,
    Verdict,
    affine_model,
    check_s_bruteforce,
    check_s_fast,
    check_s_star,
    classifier_model,
    classify,
    find_collision,
    lookup_table_model,
    make_domain,
    pairing_model,
    piecewise_model,
    restrict_model,
)
from learnability.errors import BudgetExceededError, DegenerateDomainError, InvalidExtensionError
from learnability.verifier import default_schedule

from .oracles import naive_collisions, naive_condition_s


def least_by_complement(failing, points):
    """The failing X_S whose excluded points come first (fewest, then lexicographic)."""
    domain = frozenset(points)
    return min(failing, key=lambda xs: (len(domain - xs), sorted(domain - xs)))


def all_tables(scales, n_values):
    domain = make_domain(scales)
    points = list(domain.points())
    for values in itertools.product(range(n_values), repeat=len(points)):
        yield lookup_table_model(domain, dict(zip(points, values)))


class TestBruteforce:
    def test_literal_allow_empty_fails_on_empty(self):
        model = affine_model(make_domain([3]), [2])
        report = check_s_bruteforce(model, reading="literal", policy="allow-empty")
        assert report.verdict is Verdict.FAIL
        assert report.excluded == frozenset(model.domain.points())
        assert report.failing_subset(model.domain) == frozenset()

    def test_literal_nonempty_passes(self):
        model = lookup_table_model(make_domain([4]), {}, NULL)
        assert check_s_bruteforce(model, reading="literal", policy="nonempty-proper").passed

    def test_noncontainment_injective_passes(self):
        assert check_s_bruteforce(affine_model(make_domain([5]), [2])).passed

    def test_noncontainment_table_default_witness(self):
        model = lookup_table_model(make_domain([5]), {(0,): 10}, 0)
        report = check_s_bruteforce(model)
        assert report.verdict is Verdict.FAIL
        assert report.excluded == {(1,)}
        assert report.failing_subset(model.domain) == {(0,), (2,), (3,), (4,)}

    def test_default_budget_caps(self):
        with pytest.raises(BudgetExceededError):
            check_s_bruteforce(affine_model(make_domain([13]), [1]), reading="literal")
        with pytest.raises(BudgetExceededError):
            check_s_bruteforce(affine_model(make_domain([17]), [1]))

    @pytest.mark.parametrize("reading", ["literal", "noncontainment"])
    @pytest.mark.parametrize("policy", ["allow-empty", "nonempty-proper"])
    @pytest.mark.parametrize("scales", [[1], [2], [3], [2, 2]])
    def test_matches_naive_oracle(self, reading, policy, scales):
        n_values = 3 if len(scales) == 1 else 2
        for model in all_tables(scales, n_values):
            points = list(model.domain.points())
            failing = naive_condition_s(model, points, reading, policy)
            report = check_s_bruteforce(model, reading=reading, policy=policy)
            assert report.passed == (not failing)
            if failing:
                assert report.failing_subset(model.domain) == least_by_complement(failing, points)

    def test_literal_degeneracy_over_all_tables_up_to_5(self):
        for scales, k in [([2], 2), ([3], 3), ([4], 3), ([5], 2)]:
            for model in all_tables(scales, k):
                empty = check_s_bruteforce(model, reading="literal", policy="allow-empty")
                assert empty.verdict is Verdict.FAIL and empty.failing_subset(model.domain) == frozenset()
                assert check_s_bruteforce(model, reading="literal", policy="nonempty-proper").passed


class TestFast:
    def test_base3_encoder_passes(self):
        assert check_s_fast(affine_model(make_domain([3, 3]), [1, 3])).passed

    def test_sum_fails_with_least_pair(self):
        report = check_s_fast(affine_model(make_domain([2, 2]), [1, 1]))
        assert report.verdict is Verdict.FAIL
        assert report.collision == ((0, 1), (1, 0))
        assert report.excluded == {(0, 1)}

    @pytest.mark.parametrize("scales", [[3], [5], [2, 3], [10**6]])
    def test_table_with_two_defaults_fails(self, scales):
        domain = make_domain(scales)
        report = check_s_fast(lookup_table_model(domain, {(0,) * domain.ndim: 1}, NULL))
        assert report.verdict is Verdict.FAIL
        a, b = report.collision
        assert a != b

    def test_symbolic_affine_on_huge_domain(self):
        # only the narrow dimension is enumerated; the wide one is solved
        domain = make_domain([10**6, 50])
        assert check_s_fast(affine_model(domain, [1, 10**6]), budget=10**4).passed
        report = check_s_fast(affine_model(domain, [2, 3]), budget=10**4)
        a, b = report.collision
        assert affine_model(domain, [2, 3])(a) == affine_model(domain, [2, 3])(b)

    def test_symbolic_pairing(self):
        assert check_s_fast(pairing_model(make_domain([10**9, 10**9])), budget=100).passed

    def test_no_symbolic_path(self):
        with pytest.raises(BudgetExceededError):
            check_s_fast(affine_model(make_domain([10**6, 10**6]), [1, 7]), budget=100)

    def test_agrees_with_bruteforce_small_domains(self):
        d = make_domain([2, 2, 2])
        models = [
            affine_model(d, [1, 2, 4]),
            affine_model(d, [1, 1, 1]),
            pairing_model(d),
            classifier_model(d, [("a", (0, 0, 0), Fraction(1, 3))], 3),
            restrict_model(affine_model(d, [1, 2, 4]), Box((0, 0, 0), (1, 1, 0))),
            piecewise_model(make_domain([8]), [(Box((0,), (7,)), affine_model(make_domain([8]), [1]))]),
        ]
        for model in models:
            fast, brute = check_s_fast(model), check_s_bruteforce(model)
            assert fast.verdict == brute.verdict
            assert fast.excluded == brute.excluded


class TestFindCollision:
    def test_sum(self):
        assert find_collision(affine_model(make_domain([2, 2]), [1, 1])) == ((0, 1), (1, 0))

    def test_injective(self):
        assert find_collision(affine_model(make_domain([10]), [2])) is None

    def test_least_default_pair(self):
        table = lookup_table_model(make_domain([5]), {(0,): 1, (2,): 2}, NULL)
        assert find_collision(table) == ((1,), (3,))

    def test_bound_scan_on_huge_domain(self):
        model = classifier_model(make_domain([10**9]), [("a", (0,), Fraction(1, 2))], 3)
        a, b = find_collision(model, budget=1000)
        assert model(a) == model(b) and a != b

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=1, max_size=3), st.data())
    def test_injectivity_characterization(self, scales, data):
        domain = make_domain(scales)
        points = list(domain.points())
        values = data.draw(st.lists(st.integers(0, len(points)), min_size=len(points), max_size=len(points)))
        model = lookup_table_model(domain, dict(zip(points, values)))
        naive = naive_collisions(model, points)
        found = find_collision(model)
        assert (found is None) == (not naive)
        assert check_s_fast(model).passed == (not naive)
        if naive:
            assert found == min(naive)


class TestStar:
    def test_base3_dim0_collides(self):
        entry = check_s_star(affine_model(make_domain([3, 3]), [1, 3]), dim=0)
        assert entry.verdict is Verdict.FAIL
        assert entry.certificate is Certificate.COLLISION_WITNESS
        assert entry.collision == ((3, 0), (0, 1))
        assert entry.value == 3

    def test_base3_dim1_symbolic_pass(self):
        entry = check_s_star(affine_model(make_domain([3, 3]), [1, 3]), dim=1)
        assert entry.verdict is Verdict.PASS
        assert entry.certificate is Certificate.SYMBOLIC_INJECTIVE

    def test_classifier_pigeonhole(self):
        model = classifier_model(make_domain([10, 10]), [("a", (2, 2), Fraction(1, 10)), ("b", (7, 7), Fraction(1, 10))], 100)
        entry = check_s_star(model, dim=0)
        assert entry.verdict is Verdict.FAIL
        assert entry.certificate is Certificate.PIGEONHOLE
        assert (entry.range_bound, entry.extension_scale, entry.extension_cardinality) == (202, 32, 320)
        ext = model.extend(make_domain([32, 10]))
        a, b = entry.collision
        assert ext(a) == ext(b)

    def test_scalar_line_passes(self):
        entry = check_s_star(affine_model(make_domain([10]), [2]), dim=0)
        assert entry.verdict is Verdict.PASS and entry.certificate is Certificate.SYMBOLIC_INJECTIVE

    def test_zero_weight_dimension_fails(self):
        entry = check_s_star(affine_model(make_domain([3, 3]), [0, 1]), dim=0)
        assert entry.verdict is Verdict.FAIL and entry.collision == ((1, 0), (0, 0))

    def test_rational_weights(self):
        model = affine_model(make_domain([4, 4]), [Fraction(1, 2), Fraction(3, 4)])
        entry = check_s_star(model, dim=0)
        a, b = entry.collision
        assert entry.verdict is Verdict.FAIL and a != b
        assert model.extend(make_domain([entry.extension_scale, 4]))(a) == model.extend(make_domain([entry.extension_scale, 4]))(b)

    @pytest.mark.parametrize("weights", [[1, 3], [2, 5], [1, 1], [3, 7, 11]])
    def test_affine_symbolic_agrees_with_enumeration(self, weights):
        scales = [3] * len(weights)
        model = affine_model(make_domain(scales), weights)
        for dim in range(len(weights)):
            entry = check_s_star(model, dim=dim)
            # a 64-wide extension covers every kernel vector with |d_dim| < 64
            ext = model.extend(model.domain.extend(dim, 64))
            has_collision = bool(naive_collisions(ext, ext.domain.points()))
            assert (entry.verdict is Verdict.FAIL) == has_collision

    def test_sampling_then_unknown(self):
        model = affine_model(make_domain([1000, 1000]), [1, 1000003])
        entry = check_s_star(model, dim=0, schedule=[1024, 2048], sample_budget=200, budget=100)
        assert entry.verdict is Verdict.UNKNOWN
        assert entry.certificate is Certificate.SAMPLING_EXHAUSTED

    def test_sampling_finds_collision(self):
        model = affine_model(make_domain([1000, 1000]), [1, 1])
        entry = check_s_star(model, dim=0, schedule=[1024], sample_budget=5000, budget=100, seed=3)
        assert entry.verdict is Verdict.FAIL and entry.certificate is Certificate.COLLISION_WITNESS
        a, b = entry.collision
        assert a[0] + a[1] == b[0] + b[1]

    def test_invalid_dimension(self):
        with pytest.raises(InvalidExtensionError):
            check_s_star(affine_model(make_domain([3]), [1]), dim=1)

    @pytest.mark.parametrize("schedule", [[], [2], [8, 4]])
    def test_invalid_schedule(self, schedule):
        with pytest.raises(InvalidExtensionError):
            check_s_star(affine_model(make_domain([3]), [1]), dim=0, schedule=schedule)

    def test_default_schedule(self):
        assert default_schedule(10) == (16, 32, 64, 128, 256, 512, 1024, 2048)
        assert default_schedule(8)[0] == 16
        assert len(default_schedule(3)) == 8

    def test_pigeonhole_soundness_by_enumeration(self):
        domain = make_domain([3, 2])
        models = [
            lookup_table_model(domain, {(0, 0): 1, (1, 1): 2}),
            classifier_model(domain, [("a", (0, 0), Fraction(1, 2))], 2),
            restrict_model(affine_model(domain, [1, 3]), Box((0, 0), (1, 1))),
        ]
        for model in models:
            for dim in range(2):
                entry = check_s_star(model, dim=dim)
                assert entry.certificate is Certificate.PIGEONHOLE
                ext = model.extend(domain.extend(dim, entry.extension_scale))
                assert naive_collisions(ext, ext.domain.points())

    def test_collision_persistence(self):
        model = affine_model(make_domain([2, 2]), [1, 1])
        a, b = check_s_fast(model).collision
        for dim in range(2):
            ext = model.extend(model.domain.extend(dim, 9))
            assert ext(a) == ext(b)
            assert not check_s_fast(ext).passed


class TestClassify:
    def test_database_is_non_learning(self):
        table = lookup_table_model(make_domain([5]), {(0,): 10, (1,): 20}, NULL)
        assert classify(table).overall is Overall.NON_LEARNING

    def test_linear_function_is_learning(self):
        assert classify(affine_model(make_domain([10]), [2])).overall is Overall.COMPLETE_LEARNING

    def test_classifier_fails_every_dimension(self):
        model = classifier_model(make_domain([10, 10]), [("a", (2, 2), Fraction(1, 10)), ("b", (7, 7), Fraction(1, 10))], 100)
        report = classify(model)
        assert report.overall is Overall.NON_LEARNING
        assert all(e.certificate is Certificate.PIGEONHOLE for e in report.entries)

    def test_mixed_verdicts(self):
        report = classify(affine_model(make_domain([3, 3]), [1, 3]))
        assert [e.verdict for e in report.entries] == [Verdict.FAIL, Verdict.PASS]
        assert report.overall is Overall.NON_LEARNING

    def test_undetermined(self):
        model = affine_model(make_domain([1000, 1000]), [1, 1000003])
        report = classify(model, schedule=[2048], sample_budget=100, budget=100)
        assert report.overall is Overall.UNDETERMINED

    def test_degenerate(self):
        with pytest.raises(DegenerateDomainError):
            classify(affine_model(make_domain([1]), [1]))

    def test_deterministic(self):
        model = affine_model(make_domain([1000, 1000]), [1, 1])
        runs = [classify(model, schedule=[1024], sample_budget=3000, budget=100, seed=11) for _ in range(2)]
        assert runs[0] == runs[1]
