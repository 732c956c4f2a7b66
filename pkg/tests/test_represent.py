"""Decomposition routes, minimal-summand tables, surveys, coverage."""
import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from binsum import (
    EXCEEDS_CAP,
    BinomialSequence,
    Representation,
    ResourceBudgetError,
    SearchMode,
    binom,
    decompose_k2,
    decompose_k3,
    greedy_chain,
    greedy_leading_term,
    min_rep_single,
    min_rep_table,
    minimal_representation,
    sumset_coverage_threshold,
    survey_min_rep,
    two_triangular,
)


def oracle_min_counts(k: int, n_max: int, distinct: bool = False) -> list:
    """Pure-Python minimal-summand DP, the reference for the numpy tables."""
    coins = BinomialSequence(k).values_upto(n_max)
    inf = float("inf")
    if not distinct:
        best = [inf] * (n_max + 1)
        best[0] = 0
        for target in range(1, n_max + 1):
            for v in coins:
                if v > target:
                    break
                if best[target - v] + 1 < best[target]:
                    best[target] = best[target - v] + 1
        return best
    # bounded-use DP: process coins one by one, targets descending
    best = [inf] * (n_max + 1)
    best[0] = 0
    for v in coins:
        for target in range(n_max, v - 1, -1):
            if best[target - v] + 1 < best[target]:
                best[target] = best[target - v] + 1
    return best


class TestRepresentation:
    def test_normalizes_and_validates(self):
        rep = Representation(16, 2, (3, 5, 3))
        assert rep.indices == (5, 3, 3)  # descending
        assert rep.values == (10, 3, 3)
        assert len(rep) == 3
        assert not rep.distinct

    def test_rejects_wrong_sum(self):
        with pytest.raises(ValueError):
            Representation(17, 2, (5, 3, 3))

    def test_distinct_flag(self):
        assert Representation(13, 2, (5, 3)).distinct
        assert not Representation(20, 2, (5, 5)).distinct


class TestGreedy:
    def test_leading_term_hand_values(self):
        assert greedy_leading_term(10, 2) == (5, 0)
        assert greedy_leading_term(11, 2) == (5, 1)
        assert greedy_leading_term(19, 3) == (5, 9)

    @given(st.integers(1, 10**9), st.integers(1, 5))
    @settings(max_examples=200)
    def test_leading_term_remainder_below_gap(self, target, k):
        n, remainder = greedy_leading_term(target, k)
        assert binom(n, k) + remainder == target
        assert 0 <= remainder < binom(n, k - 1)

    def test_chain_terminates(self):
        assert greedy_chain(10, 2) == [5]
        assert greedy_chain(11, 2) == [5, 2]
        chain = greedy_chain(10**6, 4)
        assert sum(binom(n, 4) for n in chain) == 10**6

    def test_chain_respects_cap(self):
        assert greedy_chain(17, 3, max_terms=2) is None


class TestTwoTriangular:
    def test_hand_values(self):
        assert two_triangular(0) == ()
        assert two_triangular(10) == (5,)
        assert two_triangular(4) == (3, 2)  # 3 + 1
        assert two_triangular(5) is None  # 5 = T + T has no solution
        assert two_triangular(2) == (2, 2)  # 1 + 1, repeats only
        assert two_triangular(2, "distinct") is None

    def test_matches_enumeration(self):
        values = BinomialSequence(2).values_upto(400)
        for r in range(401):
            sums_r = {()} if r == 0 else set()
            for a in values:
                if a == r:
                    sums_r.add((a,))
                for b in values:
                    if a + b == r:
                        sums_r.add((a, b))
            got = two_triangular(r)
            assert (got is not None) == bool(sums_r), r
            if got is not None:
                assert sum(binom(n, 2) for n in got) == r

    def test_distinct_matches_enumeration(self):
        values = BinomialSequence(2).values_upto(400)
        for r in range(401):
            ok = r == 0 or r in values or any(
                a + b == r for a, b in itertools.combinations(values, 2)
            )
            got = two_triangular(r, SearchMode.DISTINCT)
            assert (got is not None) == ok, r


class TestDecompose:
    def test_k2_hand_values(self):
        assert decompose_k2(20).values == (10, 10)
        assert decompose_k2(5).values == (3, 1, 1)
        assert decompose_k2(6).values == (6,)
        assert decompose_k2(5, "distinct") is None

    def test_k2_always_three_terms_up_to_10000(self):
        for n in range(1, 10001):
            rep = decompose_k2(n)
            assert rep is not None and len(rep) <= 3, n

    def test_k3_hand_values(self):
        assert decompose_k3(10).values == (10,)
        rep = decompose_k3(17)
        assert sum(rep.values) == 17 and len(rep) <= 7
        rep = decompose_k3(106)
        assert sum(rep.values) == 106 and len(rep) <= 7

    def test_k3_always_seven_terms_up_to_10000(self):
        for n in range(1, 10001):
            rep = decompose_k3(n)
            assert rep is not None and len(rep) <= 7, n

    @given(st.integers(1, 10**12))
    @settings(max_examples=100, deadline=None)
    def test_k2_large_targets(self, n):
        rep = decompose_k2(n)
        assert rep is not None and len(rep) <= 3
        assert sum(rep.values) == n

    @given(st.integers(1, 10**9))
    @settings(max_examples=50, deadline=None)
    def test_k3_large_targets(self, n):
        rep = decompose_k3(n)
        assert rep is not None and len(rep) <= 7
        assert sum(rep.values) == n


class TestMinimalRepresentation:
    def test_first_budget_found_is_minimal(self):
        rep = minimal_representation(17, 3)
        assert len(rep) == 5
        assert sum(rep.values) == 17

    def test_none_when_budget_too_small(self):
        assert minimal_representation(17, 3, h_max=4) is None
        assert min_rep_single(17, 3, h_max=4) is None

    def test_single_hand_values(self):
        assert min_rep_single(17, 3, 8) == 5
        assert min_rep_single(binom(1000, 3), 3, 5) == 1
        assert min_rep_single(5, 2, 3, "distinct") is None

    def test_large_target_order_two(self):
        n = 10**9 + 7
        assert min_rep_single(n, 2, 3) == 3
        # independent check that two terms are impossible: for every
        # triangular t <= n, n - t is not triangular
        values = BinomialSequence(2).values_upto(n)
        two = any(
            BinomialSequence(2).contains(n - t) for t in values if n - t >= 1
        )
        assert not two

    def test_agrees_with_table(self):
        for mode in ("repeats", "distinct"):
            table = min_rep_table(2, 300, cap=9, mode=mode)
            for n in range(1, 301):
                assert table.count(n) == min_rep_single(n, 2, 9, mode), (n, mode)


class TestMinRepTable:
    def test_hand_values_order_two(self):
        t = min_rep_table(2, 30)
        assert [t.count(n) for n in range(1, 7)] == [1, 2, 1, 2, 3, 1]
        assert t.count(0) == 0

    def test_hand_value_order_three(self):
        t = min_rep_table(3, 30)
        assert t.count(17) == 5

    def test_order_one_is_identity(self):
        t = min_rep_table(1, 100)
        assert all(t.count(n) == 1 for n in range(1, 101))

    def test_matches_python_oracle(self):
        for k in (2, 3):
            oracle = oracle_min_counts(k, 400)
            table = min_rep_table(k, 400)
            for n in range(401):
                want = None if oracle[n] == float("inf") else oracle[n]
                assert table.count(n) == want, (k, n)

    def test_distinct_matches_python_oracle(self):
        for k in (2, 3):
            oracle = oracle_min_counts(k, 400, distinct=True)
            table = min_rep_table(k, 400, cap=12, mode="distinct")
            for n in range(401):
                want = oracle[n]
                got = table.count(n)
                if want == float("inf") or want > 12:
                    assert got is None, (k, n)
                else:
                    assert got == want, (k, n)

    def test_distinct_never_below_repeats(self):
        rep = min_rep_table(2, 2000)
        dis = min_rep_table(2, 2000, cap=20, mode="distinct")
        for n in range(2001):
            r, d = rep.count(n), dis.count(n)
            assert d is None or d >= r, n

    def test_cap_marks_exceeding_cells(self):
        # with cap=1 only exact triangulars (and 0) are reachable
        t = min_rep_table(2, 20, cap=1)
        reachable = {0, 1, 3, 6, 10, 15}
        for n in range(21):
            if n in reachable:
                assert t.count(n) == (0 if n == 0 else 1)
            else:
                assert t.count(n) is None
        assert int(t.counts[2]) == EXCEEDS_CAP

    def test_range_check(self):
        t = min_rep_table(2, 10)
        with pytest.raises(ValueError):
            t.count(11)

    def test_memory_budget_enforced(self):
        with pytest.raises(ResourceBudgetError) as info:
            min_rep_table(2, 10**6, memory_budget=1000)
        assert info.value.required > info.value.budget

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            min_rep_table(0, 10)
        with pytest.raises(ValueError):
            min_rep_table(2, 10, cap=0)
        with pytest.raises(ValueError):
            min_rep_table(2, 10, cap=255)


class TestSurvey:
    def test_small_survey_order_two(self):
        s = survey_min_rep(2, 1, 1000)
        assert s.max_terms == 3
        assert s.witnesses[0] == (5, 3)
        assert s.exception_count == 0

    def test_small_survey_order_three(self):
        s = survey_min_rep(3, 1, 1000)
        assert s.max_terms == 5
        assert [n for n, _ in s.witnesses[:4]] == [17, 27, 33, 52]

    def test_witnesses_ascending_and_capped(self):
        s = survey_min_rep(2, 1, 10**5, max_witnesses=7)
        targets = [n for n, _ in s.witnesses]
        assert targets == sorted(targets)
        assert len(s.witnesses) == 7

    def test_distinct_exceptions(self):
        s = survey_min_rep(2, 1, 10**4, "distinct")
        assert s.exceptions == (2, 5, 8, 12, 23, 33)
        assert s.exception_count == 6
        assert s.max_terms == 4
        assert s.witnesses == ((20, 4),)

    def test_chunking_and_threads_do_not_change_results(self):
        base = survey_min_rep(2, 1, 20000)
        for chunk_size in (17, 1024, 999999):
            for threads in (1, 4):
                again = survey_min_rep(
                    2, 1, 20000, chunk_size=chunk_size, threads=threads
                )
                assert again == base

    def test_rejects_bad_range(self):
        with pytest.raises(ValueError):
            survey_min_rep(2, 10, 5)
        with pytest.raises(ValueError):
            survey_min_rep(2, 0, 5)


class TestCoverage:
    def test_hand_value_small(self):
        # sums of <= 2 triangulars reach {0,1,2,3,4,6,7,9,10,...}; 5 and 8
        # are missed, so the largest blocked R under 10 is 10 itself
        assert sumset_coverage_threshold(10) == 10
        assert sumset_coverage_threshold(10, "distinct") == 10

    def test_matches_enumeration(self):
        for r_max in (10, 50, 137, 400):
            for mode in ("repeats", "distinct"):
                values = BinomialSequence(2).values_upto(r_max)
                reach = {0} | set(values)
                pairs = (
                    itertools.combinations_with_replacement(values, 2)
                    if mode == "repeats"
                    else itertools.combinations(values, 2)
                )
                for a, b in pairs:
                    if a + b <= r_max:
                        reach.add(a + b)
                uncovered = [m for m in range(1, r_max + 1) if m not in reach]
                want = min(2 * uncovered[-1], r_max) if uncovered else 0
                got = sumset_coverage_threshold(r_max, mode)
                assert got == want, (r_max, mode)

    def test_memory_budget_enforced(self):
        with pytest.raises(ResourceBudgetError):
            sumset_coverage_threshold(10**6, memory_budget=100)


@given(
    st.integers(1, 4),
    st.integers(1, 2000),
    st.sampled_from([SearchMode.REPEATS, SearchMode.DISTINCT]),
)
@settings(max_examples=150, deadline=None)
def test_search_results_always_validate(k, target, mode):
    rep = minimal_representation(target, k, 8, mode)
    if rep is None:
        return
    assert sum(rep.values) == target
    assert all(n >= k for n in rep.indices)
    if mode is SearchMode.DISTINCT:
        assert rep.distinct
