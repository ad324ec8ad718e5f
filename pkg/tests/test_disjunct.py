"""Disjunct construction, exhaustive verification, and cover decoding."""

from itertools import combinations

import numpy as np
import pytest

from thresholdgt import (
    BitMatrix,
    BitVector,
    ConstructionError,
    DisjunctParams,
    cover_decode,
    gen_random_disjunct,
    gen_rs_concatenated,
    is_disjunct,
    rs_parameters,
    union_columns,
)
from thresholdgt.disjunct import (
    RANDOM_CONSTRUCTION,
    RS_CONSTRUCTION,
    disjunct_subset_count,
)

from golden import YPRIME, golden_matrix


def naive_is_disjunct(entries, r):
    """Second-implementation oracle on plain entry lists."""
    k = len(entries)
    n = len(entries[0])
    for subset in combinations(range(n), r):
        union = [max(entries[i][c] for c in subset) for i in range(k)]
        for j in range(n):
            if j in subset:
                continue
            if all(entries[i][j] <= union[i] for i in range(k)):
                return False, (j, subset)
    return True, None


class TestRsParameters:
    def test_smallest_field_for_small_instance(self):
        assert rs_parameters(1, 9) == (3, 2, 9)
        assert rs_parameters(3, 12) == (5, 2, 25)

    def test_single_symbol_messages_when_field_covers_items(self):
        q, kc, rows = rs_parameters(5, 7)
        assert (q, kc, rows) == (7, 1, 49)

    def test_infeasible_within_cap(self):
        with pytest.raises(ConstructionError):
            rs_parameters(11, 1000, max_field=11)

    def test_rejects_bad_shape(self):
        with pytest.raises(ValueError):
            rs_parameters(3, 4)
        with pytest.raises(ValueError):
            rs_parameters(0, 9)


class TestGenRsConcatenated:
    def test_nine_by_nine_instance(self):
        m = gen_rs_concatenated(1, 9)
        assert (m.rows, m.cols) == (9, 9)
        assert all(m.column(j).count() == 3 for j in range(1, 10))
        assert is_disjunct(m, 2).ok

    def test_every_column_has_q_ones(self):
        for d, n in [(1, 9), (2, 20), (3, 12)]:
            q = rs_parameters(d, n).q
            m = gen_rs_concatenated(d, n)
            assert all(m.column(j).count() == q for j in range(1, n + 1))

    def test_twenty_columns_three_disjunct(self):
        assert is_disjunct(gen_rs_concatenated(2, 20), 3).ok

    def test_one_indicator_per_position_block(self):
        # rows are grouped in q blocks of q (one block per code position);
        # each column carries exactly one 1 per block
        d, n = 2, 20
        q = rs_parameters(d, n).q
        arr = gen_rs_concatenated(d, n).to_array()
        blocks = arr.reshape(q, q, n)
        assert (blocks.sum(axis=1) == 1).all()

    def test_truncation_keeps_leading_messages(self):
        full = gen_rs_concatenated(1, 9)
        cut = gen_rs_concatenated(1, 8)
        assert cut.to_array().tolist() == full.to_array()[:, :8].tolist()


class TestGenRandomDisjunct:
    def test_deterministic_in_seed(self):
        assert gen_random_disjunct(1, 10, seed=4) == gen_random_disjunct(1, 10, seed=4)

    def test_most_seeds_give_two_disjunct(self):
        good = sum(bool(is_disjunct(gen_random_disjunct(1, 10, seed=s), 2)) for s in range(100))
        assert good >= 90

    def test_density_near_target(self):
        m = gen_random_disjunct(2, 300, seed=8)
        density = m.to_array().mean()
        target = 1 / 4
        sigma = (target * (1 - target) / (m.rows * m.cols)) ** 0.5
        assert abs(density - target) < 3 * sigma + 1e-9


class TestDisjunctParams:
    def test_reed_solomon_rows(self):
        params = DisjunctParams.reed_solomon(3, 12)
        assert params.k == 25 and params.construction == RS_CONSTRUCTION

    def test_random_rows_formula(self):
        params = DisjunctParams.random_bernoulli(1, 10)
        assert params.k == 63 and params.construction == RANDOM_CONSTRUCTION

    def test_validation(self):
        with pytest.raises(ValueError):
            DisjunctParams(d=3, n=4, k=5, construction=RS_CONSTRUCTION)
        with pytest.raises(ValueError):
            DisjunctParams(d=1, n=9, k=9, construction="magic")


class TestIsDisjunct:
    def test_golden_matrix_is_two_disjunct(self):
        assert is_disjunct(golden_matrix(), 2).ok

    def test_identity_is_disjunct_for_any_r(self):
        m = BitMatrix.identity(6)
        for r in (1, 3, 5):
            assert is_disjunct(m, r).ok

    def test_duplicate_column_fails(self):
        m = BitMatrix.from_strings(["101", "011", "110"])
        dup = BitMatrix.from_array(np.hstack([m.to_array(), m.to_array()[:, :1]]))
        check = is_disjunct(dup, 1)
        assert not check.ok
        covered, covering = check.witness
        assert union_columns(dup, covering).word | dup.column(covered).word == union_columns(dup, covering).word

    def test_matches_independent_checker(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            m = BitMatrix.from_array(rng.random((12, 7)) < 0.35)
            entries = m.to_array().tolist()
            for r in (1, 2):
                assert is_disjunct(m, r).ok == naive_is_disjunct(entries, r)[0]

    def test_validation(self):
        with pytest.raises(ValueError):
            is_disjunct(golden_matrix(), 12)
        with pytest.raises(ValueError):
            is_disjunct(golden_matrix(), 0)

    def test_subset_count(self):
        import math

        assert disjunct_subset_count(27, 4) == math.comb(27, 4)


class TestCoverDecode:
    def test_golden_outcome(self):
        assert cover_decode(golden_matrix(), BitVector.from_string(YPRIME)) == (1, 2)

    def test_all_zero_outcome_on_matrix_without_zero_column(self):
        m = gen_rs_concatenated(1, 9)
        assert cover_decode(m, BitVector.zeros(m.rows)) == ()

    def test_exact_recovery_on_disjunct_matrix(self):
        rng = np.random.default_rng(17)
        d, n = 2, 16
        m = gen_rs_concatenated(d, n)
        assert is_disjunct(m, d + 1).ok
        for _ in range(50):
            size = int(rng.integers(0, d + 2))
            cols = tuple(sorted(int(c) + 1 for c in rng.choice(n, size=size, replace=False)))
            assert cover_decode(m, union_columns(m, cols)) == cols

    def test_exhaustive_recovery_desk_scale(self):
        d, n = 2, 16
        m = gen_rs_concatenated(d, n)
        for size in range(1, d + 2):
            for cols in combinations(range(1, n + 1), size):
                assert cover_decode(m, union_columns(m, cols)) == cols

    def test_monotone_in_outcome_support(self):
        rng = np.random.default_rng(23)
        m = gen_rs_concatenated(2, 12)
        for _ in range(30):
            small = int(rng.integers(0, 1 << m.rows))
            extra = int(rng.integers(0, 1 << m.rows))
            lo = BitVector(m.rows, small)
            hi = BitVector(m.rows, small | extra)
            assert set(cover_decode(m, lo)) <= set(cover_decode(m, hi))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            cover_decode(golden_matrix(), BitVector.zeros(5))
