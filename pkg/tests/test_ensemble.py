import itertools
import math

import numpy as np
import pytest

from expanders import (
    BudgetExceededError,
    ExpanderParams,
    ProblemSize,
    Seed,
    SparseBinaryMatrix,
    ValidationError,
    certify,
    from_text,
    mc_tail,
    neighbors,
    p_n_intersect,
    rip1_ratio,
    sample,
    to_text,
)


def matrix_from_columns(n, cols):
    return SparseBinaryMatrix(
        n=n, N=len(cols), d=len(cols[0]), columns=tuple(tuple(c) for c in cols)
    )


class TestSample:
    def test_columns_are_valid_subsets(self):
        m = sample(ProblemSize(s=3, n=5, N=50, d=3), Seed(1))
        for col in m.columns:
            assert len(set(col)) == 3
            assert all(0 <= r < 5 for r in col)
            assert list(col) == sorted(col)

    def test_determinism(self):
        size = ProblemSize(s=4, n=40, N=200, d=4)
        assert sample(size, Seed(7)) == sample(size, Seed(7))
        assert sample(size, Seed(7)) != sample(size, Seed(8))

    def test_marginal_uniformity(self):
        # each row appears in a column with probability d/n
        m = sample(ProblemSize(s=2, n=10, N=20_000, d=2), Seed(5))
        counts = np.bincount(np.asarray(m.column_array()).ravel(), minlength=10)
        expected = 2 / 10 * 20_000
        assert np.all(np.abs(counts - expected) <= 5 * math.sqrt(expected))


class TestNeighbors:
    def test_singleton_and_duplicates(self):
        m = matrix_from_columns(6, [(0, 1), (0, 1), (2, 3)])
        assert neighbors(m, [0]) == 2
        assert neighbors(m, [0, 1]) == 2
        assert neighbors(m, [0, 2]) == 4

    def test_index_out_of_range(self):
        m = matrix_from_columns(6, [(0, 1)])
        with pytest.raises(ValidationError, match="out of range"):
            neighbors(m, [1])

    def test_monotone_and_bounded_on_samples(self):
        m = sample(ProblemSize(s=4, n=12, N=30, d=3), Seed(2))
        rng = np.random.default_rng(0)
        for _ in range(200):
            t = sorted(rng.choice(30, size=4, replace=False))
            s = t[:2]
            assert neighbors(m, s) <= neighbors(m, t)
            assert 3 <= neighbors(m, t) <= min(12, 3 * len(t))


class TestCertify:
    def test_duplicate_columns_fail(self):
        cols = [(0, 1), (0, 1), (2, 3), (4, 5), (6, 7), (0, 2), (1, 3), (4, 6)]
        m = matrix_from_columns(8, cols)
        params = ExpanderParams(ProblemSize(s=2, n=8, N=8, d=2), 0.25)
        report = certify(m, params)
        assert not report.is_expander
        assert report.worst_set == (0, 1)
        assert report.worst_ratio == pytest.approx(2 / 3)

    def test_single_column_always_expands(self):
        m = matrix_from_columns(1, [(0,)])
        params = ExpanderParams(ProblemSize(s=1, n=1, N=1, d=1), 0.3)
        report = certify(m, params)
        assert report.is_expander
        assert report.sets_checked == 1

    def test_pair_threshold_matches_overlap_rule(self):
        # at (s=2, d=2, eps=1/4) expansion holds iff all column pairs
        # overlap in at most one row
        params = ExpanderParams(ProblemSize(s=2, n=8, N=10, d=2), 0.25)
        for seed in range(10):
            m = sample(params.size, Seed(seed))
            overlap_ok = all(
                len(set(a) & set(b)) <= 1
                for a, b in itertools.combinations(m.columns, 2)
            )
            report = certify(m, params)
            assert report.is_expander == overlap_ok
            assert report.sets_checked == 10 + 45

    def test_top_level_only_counts(self):
        params = ExpanderParams(ProblemSize(s=2, n=6, N=6, d=2), 0.25)
        m = sample(params.size, Seed(0))
        report = certify(m, params, top_level_only=True)
        assert report.sets_checked == 15

    def test_budget_guard(self):
        size = ProblemSize(s=3, n=64, N=4000, d=2)
        big = SparseBinaryMatrix(n=64, N=4000, d=2, columns=((0, 1),) * 4000)
        with pytest.raises(BudgetExceededError):
            certify(big, ExpanderParams(size, 0.25))


class TestMcTail:
    def test_exact_pair_collision_law(self):
        # two 1-subsets of [4] collide with probability exactly 1/4
        size = ProblemSize(s=2, n=4, N=4, d=1)
        est = mc_tail(size, 1.0, True, 100_000, Seed(7))
        assert abs(est.p_hat - 0.25) <= 3 * est.std_err

    def test_trivial_thresholds(self):
        size = ProblemSize(s=2, n=6, N=6, d=2)
        assert mc_tail(size, 4.0, True, 2000, Seed(1)).p_hat == 1.0
        assert mc_tail(size, 1.5, True, 2000, Seed(1)).p_hat == 0.0

    def test_rule_of_three_on_degenerate_estimates(self):
        size = ProblemSize(s=2, n=6, N=6, d=2)
        est = mc_tail(size, 1.5, True, 2000, Seed(1))
        assert est.std_err == pytest.approx(3 / 2000)

    def test_matches_exact_cdf(self):
        # fixed-set estimates converge to the two-column union law
        for n, d in [(6, 2), (9, 3)]:
            size = ProblemSize(s=2, n=n, N=n, d=d)
            for b in range(d, 2 * d + 1):
                est = mc_tail(size, float(b), True, 60_000, Seed(3))
                exact = sum(
                    p_n_intersect(n, u, d, d) for u in range(d, min(n, b) + 1)
                )
                tol = 3 * max(est.std_err, 3 / est.trials)
                assert abs(est.p_hat - exact) <= tol

    def test_thread_partitioning_is_invisible(self):
        size = ProblemSize(s=2, n=12, N=12, d=3)
        serial = mc_tail(size, 5.0, True, 50_000, Seed(9), threads=1)
        threaded = mc_tail(size, 5.0, True, 50_000, Seed(9), threads=4)
        assert serial == threaded

    def test_all_sets_against_independent_resampler(self):
        # cross-validate the vectorized all-sets path against a plain
        # per-matrix evaluation with its own randomness
        size = ProblemSize(s=2, n=6, N=6, d=2)
        a_s = 3.0  # pairs fail at <= 3, singletons at <= 1.5
        est = mc_tail(size, a_s, False, 30_000, Seed(4))
        trials = 3000
        hits = 0
        for k in range(trials):
            m = sample(size, Seed(10_000 + k))
            bad = any(
                neighbors(m, combo) <= a_s * len(combo) / size.s
                for r in (1, 2)
                for combo in itertools.combinations(range(size.N), r)
            )
            hits += bad
        independent = hits / trials
        gap = abs(est.p_hat - independent)
        assert gap <= 3 * (est.std_err + math.sqrt(independent * (1 - independent) / trials))

    def test_all_sets_needs_budget(self):
        size = ProblemSize(s=3, n=64, N=4000, d=2)
        with pytest.raises(BudgetExceededError):
            mc_tail(size, 5.0, False, 10, Seed(0))


class TestRip1:
    def test_one_sparse_ratio_is_exactly_one(self):
        m = sample(ProblemSize(s=1, n=8, N=10, d=2), Seed(3))
        low, high = rip1_ratio(m, 1, 500, Seed(5))
        assert low == pytest.approx(1.0, abs=1e-12)
        assert high == pytest.approx(1.0, abs=1e-12)

    def test_upper_bound_never_exceeds_one(self):
        m = sample(ProblemSize(s=3, n=10, N=14, d=3), Seed(6))
        _, high = rip1_ratio(m, 3, 5000, Seed(7))
        assert high <= 1.0 + 1e-12

    def test_threads_do_not_change_extremes(self):
        m = sample(ProblemSize(s=2, n=8, N=10, d=2), Seed(6))
        assert rip1_ratio(m, 2, 20_000, Seed(8), threads=1) == rip1_ratio(
            m, 2, 20_000, Seed(8), threads=4
        )


class TestTextFormat:
    def test_round_trip(self):
        m = sample(ProblemSize(s=3, n=9, N=12, d=3), Seed(11))
        text = to_text(m)
        assert from_text(text) == m
        lines = text.split("\n")
        assert lines[0] == "12 9 3"
        assert text.endswith("\n") and not text.endswith("\n\n")
        assert all(not line.endswith(" ") for line in lines)

    def test_errors_carry_line_numbers(self):
        with pytest.raises(ValueError, match="line 1"):
            from_text("12 9\n")
        with pytest.raises(ValueError, match="line 3"):
            from_text("2 4 2\n0 1\n0 x\n")
        with pytest.raises(ValueError, match="line 3"):
            from_text("1 4 2\n0 1\nextra 9\n")


class TestMatrixValidation:
    def test_bad_columns_rejected(self):
        with pytest.raises(ValidationError):
            matrix_from_columns(4, [(1, 1)])
        with pytest.raises(ValidationError):
            matrix_from_columns(4, [(3, 1)])
        with pytest.raises(ValidationError):
            matrix_from_columns(4, [(1, 4)])

    def test_seed_range(self):
        with pytest.raises(ValidationError):
            Seed(-1)
        with pytest.raises(ValidationError):
            Seed(2**64)
