import math

import numpy as np
import pytest

from refocus.analytics import (
    chi_square_2xk,
    eta_squared_from_f,
    one_way_anova,
    paired_t_test,
    unpaired_t_test,
)
from refocus.errors import InsufficientData

from oracles import anova_oracle, chi2_table_oracle, paired_t_oracle, unpaired_t_oracle

rng = np.random.default_rng(17)


# -- unpaired t ---------------------------------------------------------------


def test_hand_arithmetic_example():
    # groups {3,4,5} vs {1,2,3}: mean diff 2, pooled sd 1, d = 2
    result = unpaired_t_test([3, 4, 5], [1, 2, 3])
    assert result.effect_size == pytest.approx(2.0)
    assert result.statistic == pytest.approx(2.0 / math.sqrt(2.0 / 3.0))
    assert result.df == (4,)


def test_identical_groups_are_null():
    result = unpaired_t_test([2.0, 3.0, 4.0], [2.0, 3.0, 4.0])
    assert result.statistic == 0.0
    assert result.p_value == 1.0
    assert result.effect_size == 0.0


def test_t_antisymmetry():
    a = rng.normal(0, 1, 12)
    b = rng.normal(0.5, 1, 15)
    assert unpaired_t_test(a, b).statistic == pytest.approx(-unpaired_t_test(b, a).statistic)


def test_d_invariant_under_common_scaling():
    a = rng.normal(3, 1, 10)
    b = rng.normal(5, 2, 10)
    d1 = unpaired_t_test(a, b).effect_size
    d2 = unpaired_t_test(7.5 * a, 7.5 * b).effect_size
    assert d1 == pytest.approx(d2)


def test_unpaired_matches_oracle_on_10_random_instances():
    for _ in range(10):
        a = rng.normal(rng.uniform(-2, 2), rng.uniform(0.5, 3), rng.integers(3, 40))
        b = rng.normal(rng.uniform(-2, 2), rng.uniform(0.5, 3), rng.integers(3, 40))
        t, df, p, d = unpaired_t_oracle(a, b)
        result = unpaired_t_test(a, b)
        assert result.statistic == pytest.approx(t, abs=1e-9)
        assert result.df[0] == df
        assert result.p_value == pytest.approx(p, abs=1e-6)
        assert result.effect_size == pytest.approx(d, abs=1e-9)


def test_too_small_groups_rejected():
    with pytest.raises(InsufficientData):
        unpaired_t_test([1.0], [2.0, 3.0])


# -- paired t ------------------------------------------------------------------


def test_paired_identical_vectors_null():
    result = paired_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert result.statistic == 0.0
    assert result.p_value == 1.0


def test_paired_matches_oracle_on_10_random_instances():
    for _ in range(10):
        n = rng.integers(3, 40)
        before = rng.normal(0, 1, n)
        after = before + rng.normal(0.4, 0.8, n)
        t, df, p, d = paired_t_oracle(before, after)
        result = paired_t_test(before, after)
        assert result.statistic == pytest.approx(t, abs=1e-9)
        assert result.df[0] == df
        assert result.p_value == pytest.approx(p, abs=1e-6)
        assert result.effect_size == pytest.approx(d, abs=1e-9)


def test_paired_length_mismatch_is_error():
    with pytest.raises(ValueError):
        paired_t_test([1.0, 2.0], [1.0, 2.0, 3.0])


def test_paired_zero_variance_nonzero_mean_flags_infinite_t():
    result = paired_t_test([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
    assert math.isinf(result.statistic)
    assert result.p_value == 0.0
    assert result.note


# -- chi squared -----------------------------------------------------------------


def test_reported_contingency_reconstruction():
    result = chi_square_2xk([[19, 7, 14, 16], [50, 47, 50, 55]])
    assert result.df == (3,)
    assert result.effect_size == pytest.approx(0.1220, abs=5e-4)
    assert result.p_value == pytest.approx(0.2794, abs=1e-3)


def test_proportional_rows_give_zero():
    result = chi_square_2xk([[10, 20, 30, 40], [20, 40, 60, 80]])
    assert result.statistic == pytest.approx(0.0, abs=1e-12)
    assert result.effect_size == pytest.approx(0.0, abs=1e-9)
    assert result.p_value == pytest.approx(1.0)


def test_chi2_invariant_under_row_swap():
    table = [[5, 9, 2, 7], [11, 3, 8, 6]]
    swapped = [table[1], table[0]]
    assert chi_square_2xk(table).statistic == pytest.approx(
        chi_square_2xk(swapped).statistic
    )


def test_chi2_matches_oracle_on_random_tables():
    for _ in range(10):
        table = rng.integers(1, 60, size=(2, 4))
        chi2, df, p, v = chi2_table_oracle(table)
        result = chi_square_2xk(table)
        assert result.statistic == pytest.approx(chi2, abs=1e-9)
        assert result.df[0] == df
        assert result.p_value == pytest.approx(p, abs=1e-6)
        assert result.effect_size == pytest.approx(v, abs=1e-9)


def test_zero_margin_rejected():
    with pytest.raises(InsufficientData):
        chi_square_2xk([[0, 5, 5, 5], [0, 4, 4, 4]])


# -- anova ------------------------------------------------------------------------


def test_identical_groups_give_f_zero():
    result = one_way_anova([[1, 2, 3], [1, 2, 3], [1, 2, 3]])
    assert result.test.statistic == pytest.approx(0.0)
    assert result.test.effect_size == pytest.approx(0.0)
    assert result.test.p_value == pytest.approx(1.0)


def test_reported_pair_is_internally_consistent():
    assert eta_squared_from_f(8.5773, 2, 57) == pytest.approx(0.2313, abs=1e-4)


def test_eta_squared_identity_holds_on_own_outputs():
    for _ in range(10):
        groups = [rng.normal(rng.uniform(-1, 1), 1.0, rng.integers(3, 25)) for _ in range(3)]
        result = one_way_anova(groups)
        f = result.test.statistic
        df1, df2 = result.test.df
        assert result.test.effect_size == pytest.approx(eta_squared_from_f(f, df1, df2), abs=1e-12)
        assert 0.0 <= result.test.effect_size <= 1.0


def test_anova_matches_oracle_on_10_random_instances():
    for _ in range(10):
        k = int(rng.integers(2, 5))
        groups = [rng.normal(rng.uniform(-2, 2), rng.uniform(0.5, 2), rng.integers(3, 30))
                  for _ in range(k)]
        f, (df1, df2), p, eta2 = anova_oracle(groups)
        result = one_way_anova(groups)
        assert result.test.statistic == pytest.approx(f, abs=1e-9)
        assert result.test.df == (df1, df2)
        assert result.test.p_value == pytest.approx(p, abs=1e-6)
        assert result.test.effect_size == pytest.approx(eta2, abs=1e-9)


def test_post_hoc_is_bonferroni_corrected_pairwise():
    groups = [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [1.5, 2.5, 3.5]]
    result = one_way_anova(groups)
    assert len(result.post_hoc) == 3
    for comparison in result.post_hoc:
        i, j = comparison.groups
        raw = unpaired_t_test(groups[i], groups[j])
        assert comparison.result.statistic == pytest.approx(raw.statistic)
        assert comparison.result.p_value == pytest.approx(min(1.0, raw.p_value * 3))
        assert comparison.result.effect_size == pytest.approx(raw.effect_size)


def test_fewer_than_two_groups_rejected():
    with pytest.raises(InsufficientData):
        one_way_anova([[1.0, 2.0]])
