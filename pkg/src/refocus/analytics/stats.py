"""Hypothesis tests and effect sizes used by the session reports.

All tests are two-sided. Effect sizes follow the usual definitions:
Cohen's d against the pooled standard deviation for unpaired data and
against the standard deviation of the differences for paired data,
Cramer's V = sqrt(chi2 / N) for a 2 x k table, and eta squared as the
between-groups share of the total sum of squares.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import InsufficientData
from .special import chi2_sf, f_sf, student_t_p_two_sided


@dataclass(frozen=True)
class TestResult:
    statistic: float
    df: tuple[float, ...]
    p_value: float
    effect_size: float
    effect_name: str
    note: str = ""

    def __post_init__(self):
        if not (math.isnan(self.p_value) or 0.0 <= self.p_value <= 1.0):
            raise ValueError("p-value out of [0, 1]")


@dataclass(frozen=True)
class PairwiseComparison:
    groups: tuple[int, int]
    result: TestResult


@dataclass(frozen=True)
class AnovaResult:
    test: TestResult
    group_means: tuple[float, ...]
    post_hoc: tuple[PairwiseComparison, ...] = field(default_factory=tuple)


def _as_array(values, name: str) -> np.ndarray:
    arr = np.asarray(list(values), dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    return arr


def pooled_sd(a: np.ndarray, b: np.ndarray) -> float:
    n1, n2 = len(a), len(b)
    var = ((n1 - 1) * np.var(a, ddof=1) + (n2 - 1) * np.var(b, ddof=1)) / (n1 + n2 - 2)
    return float(np.sqrt(var))


def unpaired_t_test(a, b) -> TestResult:
    """Two-sided pooled-variance t-test; d = (mean(a) - mean(b)) / pooled sd."""
    a = _as_array(a, "a")
    b = _as_array(b, "b")
    if len(a) < 2 or len(b) < 2:
        raise InsufficientData("each group needs at least 2 values")
    diff = float(np.mean(a) - np.mean(b))
    sp = pooled_sd(a, b)
    df = len(a) + len(b) - 2
    if sp == 0.0:
        if diff == 0.0:
            return TestResult(0.0, (df,), 1.0, 0.0, "cohen_d")
        return TestResult(math.inf, (df,), 0.0, math.inf, "cohen_d", note="zero pooled variance")
    se = sp * math.sqrt(1.0 / len(a) + 1.0 / len(b))
    t = diff / se
    return TestResult(t, (df,), student_t_p_two_sided(t, df), diff / sp, "cohen_d")


def paired_t_test(before, after) -> TestResult:
    """Two-sided paired t-test on after - before; d = mean(diff)/sd(diff)."""
    before = _as_array(before, "before")
    after = _as_array(after, "after")
    if len(before) != len(after):
        raise ValueError("paired samples must have equal lengths")
    if len(before) < 2:
        raise InsufficientData("need at least 2 pairs")
    diffs = after - before
    mean = float(np.mean(diffs))
    sd = float(np.std(diffs, ddof=1))
    df = len(diffs) - 1
    if sd == 0.0:
        if mean == 0.0:
            return TestResult(0.0, (df,), 1.0, 0.0, "cohen_d")
        return TestResult(
            math.copysign(math.inf, mean), (df,), 0.0, math.copysign(math.inf, mean),
            "cohen_d", note="zero variance of differences",
        )
    t = mean / (sd / math.sqrt(len(diffs)))
    return TestResult(t, (df,), student_t_p_two_sided(t, df), mean / sd, "cohen_d")


def chi_square_2xk(table) -> TestResult:
    """Pearson chi-squared for a 2 x k contingency table with Cramer's V."""
    observed = np.asarray(table, dtype=float)
    if observed.ndim != 2 or observed.shape[0] != 2 or observed.shape[1] < 2:
        raise ValueError("expected a 2 x k table with k >= 2")
    if np.any(observed < 0):
        raise ValueError("counts must be non-negative")
    row = observed.sum(axis=1)
    col = observed.sum(axis=0)
    if np.any(row == 0) or np.any(col == 0):
        raise InsufficientData("table has a zero-margin row or column")
    total = observed.sum()
    expected = np.outer(row, col) / total
    chi2 = float(np.sum((observed - expected) ** 2 / expected))
    df = observed.shape[1] - 1
    v = math.sqrt(chi2 / total)  # min(r, c) - 1 == 1 for two rows
    return TestResult(chi2, (df,), chi2_sf(chi2, df), v, "cramer_v")


def one_way_anova(groups: Sequence, bonferroni: bool = True) -> AnovaResult:
    """One-way between-groups ANOVA with eta squared and pairwise post-hocs."""
    arrays = [_as_array(g, "group") for g in groups]
    if len(arrays) < 2:
        raise InsufficientData("need at least 2 groups")
    for g in arrays:
        if len(g) < 2:
            raise InsufficientData("every group needs at least 2 values")
    grand = float(np.mean(np.concatenate(arrays)))
    ss_between = sum(len(g) * (float(np.mean(g)) - grand) ** 2 for g in arrays)
    ss_within = sum(float(np.sum((g - np.mean(g)) ** 2)) for g in arrays)
    ss_total = ss_between + ss_within
    k = len(arrays)
    n = sum(len(g) for g in arrays)
    df1, df2 = k - 1, n - k
    if ss_within == 0.0:
        if ss_between == 0.0:
            test = TestResult(0.0, (df1, df2), 1.0, 0.0, "eta_squared")
        else:
            test = TestResult(math.inf, (df1, df2), 0.0, 1.0, "eta_squared",
                              note="zero within-group variance")
        return AnovaResult(test, tuple(float(np.mean(g)) for g in arrays), ())
    f = (ss_between / df1) / (ss_within / df2)
    eta2 = ss_between / ss_total if ss_total > 0 else 0.0
    test = TestResult(f, (df1, df2), f_sf(f, df1, df2), eta2, "eta_squared")

    comparisons = []
    m = k * (k - 1) // 2
    for i in range(k):
        for j in range(i + 1, k):
            pair = unpaired_t_test(arrays[i], arrays[j])
            p = min(1.0, pair.p_value * m) if bonferroni else pair.p_value
            note = "bonferroni" if bonferroni else ""
            corrected = TestResult(pair.statistic, pair.df, p, pair.effect_size,
                                   pair.effect_name, note=note)
            comparisons.append(PairwiseComparison((i, j), corrected))
    return AnovaResult(test, tuple(float(np.mean(g)) for g in arrays), tuple(comparisons))


def eta_squared_from_f(f: float, df1: float, df2: float) -> float:
    """Algebraic identity linking F and eta squared for one-way designs."""
    return f * df1 / (f * df1 + df2)
