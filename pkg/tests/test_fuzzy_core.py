from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fuzzyreason import (
    LABELS,
    CohortStageCounts,
    DomainError,
    EmptyFuzzySetError,
    PerformanceLabel,
    StageFuzzySet,
    build_stage_set,
    classify_numeric_score,
    membership_grade,
    normalize_distribution,
    parse_label,
)
from fuzzyreason.fuzzy_core import GRADES, to_fraction

a, b, c, d, e = LABELS


def grade_oracle(count, n):
    """Count how many quintile thresholds k*n/5 (k = 1..4) the count strictly exceeds."""
    passed = sum(1 for k in range(1, 5) if Fraction(count) > Fraction(k * n, 5))
    return Fraction(passed, 4)


class TestLabels:
    def test_total_order(self):
        assert a < b < c < d < e
        assert [lab.rank for lab in LABELS] == [0, 1, 2, 3, 4]

    def test_intervals_partition_zero_to_five(self):
        edges = [lab.score_interval for lab in LABELS]
        assert edges[0][0] == 0 and edges[-1][1] == 5
        for (lo1, hi1, closed1), (lo2, _, _) in zip(edges, edges[1:]):
            assert hi1 == lo2 and not closed1
        assert edges[-1][2]

    @pytest.mark.parametrize(
        "token, expected",
        [("a", a), ("E", e), (" c ", c), ("very_low", a), ("Very High", e), ("intermediate", c), ("HIGH", d)],
    )
    def test_parse(self, token, expected):
        assert parse_label(token) is expected

    def test_parse_unknown_names_token(self):
        with pytest.raises(DomainError, match="'f'"):
            parse_label("f")


class TestClassify:
    @pytest.mark.parametrize(
        "score, label", [(2.4, c), (0, a), (5, e), (3.0, d), (0.999, a), (1, b), (4, e), (4.5, e), ("7/2", d)]
    )
    def test_examples(self, score, label):
        assert classify_numeric_score(score) is label

    @pytest.mark.parametrize("score", [-0.001, 5.0001, 6, -1])
    def test_out_of_range(self, score):
        with pytest.raises(DomainError):
            classify_numeric_score(score)

    @given(st.integers(0, 4), st.fractions(min_value=0, max_value=1).filter(lambda f: f < 1))
    def test_rank_intervals(self, rank, offset):
        assert classify_numeric_score(rank + offset).rank == rank


class TestMembershipGrade:
    @pytest.mark.parametrize(
        "count, n, grade",
        [(15, 35, Fraction(1, 2)), (12, 35, Fraction(1, 4)), (0, 35, 0), (7, 35, 0), (35, 35, 1), (8, 35, Fraction(1, 4))],
    )
    def test_examples(self, count, n, grade):
        assert membership_grade(count, n) == grade

    def test_matches_oracle_exhaustively(self):
        for n in range(1, 61):
            for count in range(n + 1):
                assert membership_grade(count, n) == grade_oracle(count, n), (count, n)

    @pytest.mark.parametrize("count, n", [(-1, 5), (6, 5), (0, 0), (1, -3)])
    def test_domain_errors(self, count, n):
        with pytest.raises(DomainError):
            membership_grade(count, n)

    def test_rejects_non_integers(self):
        with pytest.raises(DomainError):
            membership_grade(1.5, 5)

    @given(st.integers(1, 500).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n), st.integers(0, n))))
    def test_monotone_in_count(self, args):
        n, x, y = args
        lo, hi = sorted((x, y))
        assert membership_grade(lo, n) <= membership_grade(hi, n)

    @given(st.integers(1, 300).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))))
    def test_scale_invariance(self, args):
        n, count = args
        assert membership_grade(count, n) == membership_grade(5 * count, 5 * n)
        assert membership_grade(count, n) in GRADES


class TestStageSets:
    def test_first_group_imagination(self):
        s = build_stage_set(CohortStageCounts(35, (0, 0, 15, 12, 8)))
        assert s.memberships == (0, 0, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))

    def test_whole_cohort_on_one_label(self):
        assert build_stage_set(CohortStageCounts(5, (5, 0, 0, 0, 0))).memberships == (1, 0, 0, 0, 0)

    def test_second_group_imagination_counts(self):
        counts = (3, 14, 22, 11, 0)
        expected = tuple(grade_oracle(x, 50) for x in counts)
        assert expected == (0, Fraction(1, 4), Fraction(1, 2), Fraction(1, 4), 0)
        assert build_stage_set(CohortStageCounts(50, counts)).memberships == expected

    @pytest.mark.parametrize("n, counts", [(10, (1, 2, 3, 4, 1)), (5, (5, 0, 0, 0)), (3, (4, -1, 0, 0, 0))])
    def test_counts_invariant(self, n, counts):
        with pytest.raises(DomainError):
            CohortStageCounts(n, counts)

    @given(st.lists(st.integers(0, 40), min_size=5, max_size=5).filter(any))
    def test_grades_are_quarters(self, counts):
        s = build_stage_set(CohortStageCounts(sum(counts), tuple(counts)))
        assert all(m in GRADES for m in s)

    def test_from_mapping_fills_missing_labels(self):
        s = StageFuzzySet.from_mapping({"c": "1/2", "very_high": 0.25})
        assert s.memberships == (0, 0, Fraction(1, 2), 0, Fraction(1, 4))
        assert s["e"] == Fraction(1, 4)
        assert s.as_dict()["a"] == 0

    @pytest.mark.parametrize("values", [(0, 0, 0, 0, 1.5), (0, 0, -0.25, 0, 0), (0, 0, 0, 0)])
    def test_degree_bounds(self, values):
        with pytest.raises(DomainError):
            StageFuzzySet(values)

    def test_float_input_is_read_as_decimal(self):
        assert to_fraction(0.67) == Fraction(67, 100)
        assert to_fraction("0.33") == Fraction(33, 100)


class TestNormalize:
    def test_visualization_set(self):
        y = normalize_distribution((0, 0, Fraction(1, 2), Fraction(1, 4), 0)).y
        assert y == (0, 0, Fraction(2, 3), Fraction(1, 3), 0)

    def test_already_normalized(self):
        m = (0, 0, Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
        assert normalize_distribution(m).y == m

    def test_three_quarters(self):
        q = Fraction(1, 4)
        assert normalize_distribution((q, q, q, 0, 0)).y == (Fraction(1, 3),) * 3 + (0, 0)

    def test_empty_set(self):
        with pytest.raises(EmptyFuzzySetError, match="empty fuzzy set"):
            normalize_distribution(StageFuzzySet((0,) * 5))

    weights = st.lists(st.fractions(min_value=0, max_value=1), min_size=5, max_size=5).filter(any)

    @given(weights, st.fractions(min_value=Fraction(1, 100), max_value=100))
    def test_scale_invariant_and_idempotent(self, w, lam):
        y = normalize_distribution(w)
        assert sum(y) == 1
        assert normalize_distribution([lam * v for v in w]) == y
        assert normalize_distribution(y) == y


def test_label_enum_members():
    assert PerformanceLabel["d"].long_name == "high"
    assert str(PerformanceLabel.e) == "e"
