"""Independent brute-force reference implementations used by the tests.

These deliberately avoid the package's own code paths: p-values come
from numerical quadrature of the textbook densities, test statistics
from direct sum formulas, and spectral peaks from a plain FFT of the
signal under test.
"""
from __future__ import annotations

import math

import numpy as np
from scipy import integrate


def fft_peak_hz(signal: np.ndarray, sample_rate: float) -> float:
    """Dominant spectral peak with parabolic interpolation."""
    signal = np.asarray(signal, dtype=float)
    spectrum = np.abs(np.fft.rfft(signal * np.hanning(len(signal))))
    k = int(np.argmax(spectrum))
    if 0 < k < len(spectrum) - 1:
        a, b, c = spectrum[k - 1], spectrum[k], spectrum[k + 1]
        denom = a - 2 * b + c
        if denom != 0:
            k = k + 0.5 * (a - c) / denom
    return k * sample_rate / len(signal)


# -- densities, integrated numerically ---------------------------------------


def t_pdf(x: float, df: float) -> float:
    c = math.exp(math.lgamma((df + 1) / 2) - math.lgamma(df / 2)) / math.sqrt(df * math.pi)
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


def t_p_two_sided(t: float, df: float) -> float:
    if math.isinf(t):
        return 0.0
    tail, _ = integrate.quad(t_pdf, abs(t), math.inf, args=(df,))
    return min(1.0, 2.0 * tail)


def f_pdf(x: float, d1: float, d2: float) -> float:
    if x <= 0:
        return 0.0
    logc = (
        (d1 / 2) * math.log(d1 / d2)
        + math.lgamma((d1 + d2) / 2)
        - math.lgamma(d1 / 2)
        - math.lgamma(d2 / 2)
    )
    logpdf = logc + (d1 / 2 - 1) * math.log(x) - ((d1 + d2) / 2) * math.log(1 + d1 * x / d2)
    return math.exp(logpdf)


def f_p(f: float, d1: float, d2: float) -> float:
    if f <= 0:
        return 1.0
    tail, _ = integrate.quad(f_pdf, f, math.inf, args=(d1, d2))
    return min(1.0, tail)


def chi2_pdf(x: float, df: float) -> float:
    if x <= 0:
        return 0.0
    logpdf = (df / 2 - 1) * math.log(x) - x / 2 - math.lgamma(df / 2) - (df / 2) * math.log(2)
    return math.exp(logpdf)


def chi2_p(x: float, df: float) -> float:
    if x <= 0:
        return 1.0
    tail, _ = integrate.quad(chi2_pdf, x, math.inf, args=(df,))
    return min(1.0, tail)


# -- direct statistic formulas -------------------------------------------------


def unpaired_t_oracle(a, b) -> tuple[float, float, float, float]:
    """(t, df, p, cohen_d) by the pooled-variance textbook formulas."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    n1, n2 = len(a), len(b)
    m1, m2 = a.mean(), b.mean()
    s1 = ((a - m1) ** 2).sum() / (n1 - 1)
    s2 = ((b - m2) ** 2).sum() / (n2 - 1)
    sp = math.sqrt(((n1 - 1) * s1 + (n2 - 1) * s2) / (n1 + n2 - 2))
    t = (m1 - m2) / (sp * math.sqrt(1 / n1 + 1 / n2))
    df = n1 + n2 - 2
    return t, df, t_p_two_sided(t, df), (m1 - m2) / sp


def paired_t_oracle(before, after) -> tuple[float, float, float, float]:
    d = np.asarray(after, float) - np.asarray(before, float)
    n = len(d)
    mean = d.mean()
    sd = math.sqrt(((d - mean) ** 2).sum() / (n - 1))
    t = mean / (sd / math.sqrt(n))
    return t, n - 1, t_p_two_sided(t, n - 1), mean / sd


def chi2_table_oracle(table) -> tuple[float, float, float, float]:
    """(chi2, df, p, cramer_v) with expected counts from the margins."""
    obs = np.asarray(table, float)
    rows, cols = obs.shape
    total = obs.sum()
    chi2 = 0.0
    for i in range(rows):
        for j in range(cols):
            expected = obs[i].sum() * obs[:, j].sum() / total
            chi2 += (obs[i, j] - expected) ** 2 / expected
    df = (rows - 1) * (cols - 1)
    v = math.sqrt(chi2 / (total * (min(rows, cols) - 1)))
    return chi2, df, chi2_p(chi2, df), v


def anova_oracle(groups) -> tuple[float, tuple[int, int], float, float]:
    """(F, (df1, df2), p, eta2) by explicit sums of squares."""
    groups = [np.asarray(g, float) for g in groups]
    all_values = np.concatenate(groups)
    grand = all_values.mean()
    ss_between = sum(len(g) * (g.mean() - grand) ** 2 for g in groups)
    ss_within = sum(((g - g.mean()) ** 2).sum() for g in groups)
    df1 = len(groups) - 1
    df2 = len(all_values) - len(groups)
    f = (ss_between / df1) / (ss_within / df2)
    eta2 = ss_between / (ss_between + ss_within)
    return f, (df1, df2), f_p(f, df1, df2), eta2
