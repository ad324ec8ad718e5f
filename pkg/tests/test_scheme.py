"""Scheme assembly, threshold encoding, conversion rules, and the decoder."""

from itertools import combinations

import numpy as np
import pytest

from thresholdgt import (
    BitMatrix,
    BitVector,
    DefectiveSet,
    MeasurementScheme,
    build_scheme,
    classical_encode,
    complement,
    convert_outcomes,
    decode,
    gen_random,
    gen_rs_concatenated,
    is_completely_separating,
    is_disjunct,
    mask_columns,
    rows_needed_deterministic,
    rows_needed_randomized,
    simulate_instance,
    stack_matrix,
    threshold_encode,
)
from thresholdgt.scheme import (
    MODE_DETERMINISTIC,
    MODE_RANDOMIZED,
    OutcomeVector,
    RowOutcome,
    format_scheme,
    parse_scheme,
)

from golden import DEFECTIVES, MATRIX_ROWS, THRESHOLD, Y, YBAR, YPRIME, golden_defective_vector, golden_matrix


def golden_scheme() -> MeasurementScheme:
    """Single all-ones pool row over the golden 9x12 code matrix, u = d = 2."""
    return MeasurementScheme(
        n=12, d=2, u=2, mode=MODE_DETERMINISTIC, epsilon=0.0, seed=0,
        pool_matrix=BitMatrix.ones(1, 12), code_matrix=golden_matrix(),
    )


def verified_small_scheme(n=9, d=3, u=2, max_seed=50) -> MeasurementScheme:
    """Scheme whose pool matrix is brute-force verified (u, d-u)-separating."""
    h = rows_needed_deterministic(u, d - u, n)
    for seed in range(max_seed):
        pool = gen_random(h, n, u / d, seed)
        if is_completely_separating(pool, u, d - u).ok:
            code = gen_rs_concatenated(d, n)
            assert is_disjunct(code, d + 1).ok
            return MeasurementScheme(
                n=n, d=d, u=u, mode=MODE_DETERMINISTIC, epsilon=0.0, seed=seed,
                pool_matrix=pool, code_matrix=code,
            )
    raise AssertionError("no verified separating matrix found")


class TestBuildScheme:
    def test_u_equals_d_collapses_pool(self):
        s = build_scheme(12, 2, 2, seed=0)
        assert s.h == 1
        assert s.pool_matrix == BitMatrix.ones(1, 12)
        assert s.num_tests == 2 * s.k + 1

    def test_stacked_row_count(self):
        s = build_scheme(20, 3, 2, seed=1)
        assert stack_matrix(s).rows == (2 * s.k + 1) * s.h == s.num_tests

    def test_randomized_row_count_matches_formula(self):
        s = build_scheme(12, 3, 2, mode=MODE_RANDOMIZED, seed=3, epsilon=0.1)
        assert s.h == rows_needed_randomized(2, 3, 0.1)

    def test_deterministic_row_count_matches_formula(self):
        s = build_scheme(12, 3, 2, seed=3)
        assert s.h == rows_needed_deterministic(2, 1, 12)

    def test_same_seed_same_scheme(self):
        assert build_scheme(15, 3, 2, seed=9) == build_scheme(15, 3, 2, seed=9)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_scheme(12, 3, 1)
        with pytest.raises(ValueError):
            build_scheme(12, 12, 2)
        with pytest.raises(ValueError):
            build_scheme(12, 3, 2, mode=MODE_RANDOMIZED)
        with pytest.raises(ValueError):
            build_scheme(12, 3, 2, epsilon=0.1)
        with pytest.raises(ValueError):
            build_scheme(12, 3, 2, mode="bogus")


class TestStackMatrix:
    def test_all_ones_pool_row(self):
        s = golden_scheme()
        t = stack_matrix(s)
        m = golden_matrix()
        assert t.row(1) == BitVector.ones(12)
        for l in range(1, 10):
            assert t.row(1 + l) == m.row(l)
            assert t.row(10 + l) == complement(m).row(l)

    def test_all_zeros_pool_row_zeroes_block(self):
        s = MeasurementScheme(
            n=12, d=2, u=2, mode=MODE_DETERMINISTIC, epsilon=0.0, seed=0,
            pool_matrix=BitMatrix.zeros(1, 12), code_matrix=golden_matrix(),
        )
        assert stack_matrix(s) == BitMatrix.zeros(19, 12)

    def test_block_layout_positions(self):
        s = build_scheme(10, 3, 2, seed=4)
        t = stack_matrix(s)
        k = s.k
        for i in range(1, s.h + 1):
            base = (2 * k + 1) * (i - 1)
            g_row = s.pool_matrix.row(i)
            assert t.row(base + 1) == g_row
            masked = mask_columns(s.code_matrix, g_row)
            masked_c = mask_columns(complement(s.code_matrix), g_row)
            for l in range(1, k + 1):
                assert t.row(base + 1 + l) == masked.row(l)
                assert t.row(base + 1 + k + l) == masked_c.row(l)


class TestThresholdEncode:
    def test_golden_outcomes(self):
        m = golden_matrix()
        x = golden_defective_vector()
        assert str(threshold_encode(m, x, THRESHOLD)) == Y
        assert str(threshold_encode(complement(m), x, THRESHOLD)) == YBAR

    def test_no_defectives_all_negative(self):
        m = golden_matrix()
        assert threshold_encode(m, BitVector.zeros(12), 2) == BitVector.zeros(9)

    def test_integer_count_not_boolean(self):
        tests = BitMatrix.from_strings(["1100", "1110"])
        x = BitVector.from_string("1110")
        assert str(threshold_encode(tests, x, 3)) == "01"

    def test_validation(self):
        with pytest.raises(ValueError):
            threshold_encode(golden_matrix(), BitVector.zeros(5), 2)
        with pytest.raises(ValueError):
            threshold_encode(golden_matrix(), BitVector.zeros(12), 0)


class TestClassicalEncode:
    def test_golden_union_outcome(self):
        assert str(classical_encode(golden_matrix(), golden_defective_vector())) == YPRIME

    def test_empty_defectives(self):
        assert classical_encode(golden_matrix(), BitVector.zeros(12)) == BitVector.zeros(9)

    def test_equals_threshold_at_one(self):
        rng = np.random.default_rng(100)
        for _ in range(20):
            m = BitMatrix.from_array(rng.random((8, 10)) < 0.4)
            x = BitVector(10, int(rng.integers(0, 1 << 10)))
            assert classical_encode(m, x) == threshold_encode(m, x, 1)


class TestConvertOutcomes:
    def test_golden_conversion(self):
        got = convert_outcomes(BitVector.from_string(Y), BitVector.from_string(YBAR))
        assert str(got) == YPRIME

    def test_rule_one_dominates(self):
        ones = BitVector.ones(6)
        for word in range(0, 1 << 6, 7):
            comp = BitVector(6, word % (1 << 6))
            assert convert_outcomes(ones, comp) == ones

    def test_truth_table(self):
        direct = BitVector.from_bits([1, 1, 0, 0])
        comp = BitVector.from_bits([1, 0, 1, 0])
        assert convert_outcomes(direct, comp) == BitVector.from_bits([1, 1, 0, 1])

    @pytest.mark.parametrize("u", [2, 3])
    def test_recovers_classical_outcome_exhaustively(self, u):
        # at exactly u marked items the conversion equals the boolean
        # encoding, for any binary matrix
        rng = np.random.default_rng(42)
        matrices = [golden_matrix()] + [
            BitMatrix.from_array(rng.random((7, 8)) < p) for p in (0.3, 0.5, 0.7)
        ]
        for m in matrices:
            mbar = complement(m)
            for cols in combinations(range(1, m.cols + 1), u):
                x = BitVector.from_indices(m.cols, cols)
                direct = threshold_encode(m, x, u)
                comp = threshold_encode(mbar, x, u)
                assert convert_outcomes(direct, comp) == classical_encode(m, x)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            convert_outcomes(BitVector.zeros(3), BitVector.zeros(4))


class TestOutcomeVector:
    def test_flat_round_trip(self):
        rng = np.random.default_rng(3)
        k, h = 5, 4
        rows = tuple(
            RowOutcome(
                int(rng.integers(0, 2)),
                BitVector(k, int(rng.integers(0, 1 << k))),
                BitVector(k, int(rng.integers(0, 1 << k))),
            )
            for _ in range(h)
        )
        ov = OutcomeVector(k=k, rows=rows)
        assert ov.length == (2 * k + 1) * h
        assert OutcomeVector.from_flat(ov.flat(), h, k) == ov

    def test_from_flat_rejects_bad_length(self):
        with pytest.raises(ValueError):
            OutcomeVector.from_flat(BitVector.zeros(10), 1, 5)

    def test_block_validation(self):
        with pytest.raises(ValueError):
            OutcomeVector(k=3, rows=(RowOutcome(1, BitVector.zeros(2), BitVector.zeros(3)),))
        with pytest.raises(ValueError):
            OutcomeVector(k=3, rows=())


class TestSimulateInstance:
    def test_empty_set_gives_all_zeros(self):
        s = verified_small_scheme()
        assert simulate_instance(s, []).flat() == BitVector.zeros(s.num_tests)

    def test_threshold_met_on_all_ones_row(self):
        s = golden_scheme()
        out = simulate_instance(s, [3, 7])
        assert out.rows[0].gate == 1

    def test_matches_flat_threshold_encoding(self):
        for seed in range(4):
            s = build_scheme(11, 3, 2, seed=seed)
            rng = np.random.default_rng(seed)
            size = int(rng.integers(0, 4))
            items = sorted(int(c) + 1 for c in rng.choice(11, size=size, replace=False))
            flat = threshold_encode(
                stack_matrix(s), BitVector.from_indices(11, items) if items else BitVector.zeros(11), s.u
            )
            assert simulate_instance(s, items).flat() == flat

    def test_gate_semantics_match_pool_hits(self):
        s = build_scheme(15, 4, 2, seed=6)
        items = (2, 9, 14)
        out = simulate_instance(s, items)
        for i in range(1, s.h + 1):
            hits = sum(s.pool_matrix.get(i, j) for j in items)
            assert out.rows[i - 1].gate == (1 if hits >= s.u else 0)

    def test_validation(self):
        s = golden_scheme()
        with pytest.raises(IndexError):
            simulate_instance(s, [13])
        with pytest.raises(ValueError):
            simulate_instance(s, [1, 2, 3])
        with pytest.raises(ValueError):
            simulate_instance(s, [1, 1])


class TestDecode:
    def test_golden_end_to_end(self):
        s = golden_scheme()
        out = simulate_instance(s, DEFECTIVES)
        assert decode(s, out).items == DEFECTIVES

    def test_all_zero_outcome_decodes_empty(self):
        s = golden_scheme()
        out = simulate_instance(s, [])
        assert decode(s, out).items == ()

    def test_below_threshold_decodes_empty(self):
        s = verified_small_scheme()
        for j in range(1, s.n + 1):
            assert decode(s, simulate_instance(s, [j])).items == ()

    def test_exhaustive_exact_recovery_with_verified_pool(self):
        s = verified_small_scheme(n=9, d=3, u=2)
        for size in (2, 3):
            for items in combinations(range(1, 10), size):
                got = decode(s, simulate_instance(s, items))
                assert got.items == items

    def test_u_equals_d_recovers_every_pair(self):
        s = build_scheme(10, 2, 2, seed=2)
        assert is_disjunct(s.code_matrix, 3).ok
        for items in combinations(range(1, 11), 2):
            assert decode(s, simulate_instance(s, items)).items == items

    def test_no_false_positives_even_with_terrible_pool(self):
        # the validation step rejects wrong candidate sets for any pool
        # matrix, as long as the code matrix is (d+1)-disjunct
        n, d, u = 30, 3, 2
        code = gen_rs_concatenated(d, n)
        rng = np.random.default_rng(55)
        for seed in range(30):
            pool = gen_random(4, n, 0.6, seed=seed)  # far too few rows
            s = MeasurementScheme(
                n=n, d=d, u=u, mode=MODE_DETERMINISTIC, epsilon=0.0, seed=seed,
                pool_matrix=pool, code_matrix=code,
            )
            size = int(rng.integers(u, d + 1))
            items = set(int(c) + 1 for c in rng.choice(n, size=size, replace=False))
            decoded = set(decode(s, simulate_instance(s, sorted(items))))
            assert decoded <= items

    def test_shape_mismatch_rejected(self):
        s = golden_scheme()
        other = OutcomeVector.from_flat(BitVector.zeros(10), 2, 2)
        with pytest.raises(ValueError):
            decode(s, other)


class TestDefectiveSet:
    def test_sorted_unique(self):
        assert DefectiveSet.of([3, 1, 3]).items == (1, 3)
        assert list(DefectiveSet.of([2, 1])) == [1, 2]
        assert 2 in DefectiveSet.of([2]) and len(DefectiveSet.of([2])) == 1

    def test_rejects_bad_items(self):
        with pytest.raises(ValueError):
            DefectiveSet.of([0])


class TestSerialization:
    def test_round_trip(self):
        for s in (golden_scheme(), build_scheme(14, 4, 3, mode=MODE_RANDOMIZED, seed=5, epsilon=0.2)):
            assert parse_scheme(format_scheme(s)) == s

    def test_file_round_trip(self, tmp_path):
        from thresholdgt import load_scheme, save_scheme

        s = build_scheme(10, 3, 2, seed=1)
        save_scheme(s, tmp_path / "s.txt")
        assert load_scheme(tmp_path / "s.txt") == s

    def test_header_mismatch_rejected(self):
        from thresholdgt import FormatError

        text = format_scheme(golden_scheme()).replace("k 9", "k 8")
        with pytest.raises(FormatError):
            parse_scheme(text)

    def test_missing_section_rejected(self):
        from thresholdgt import FormatError

        text = format_scheme(golden_scheme()).split("pool")[0]
        with pytest.raises(FormatError):
            parse_scheme(text)
