"""Statistics toolkit walkthrough.

Reproduces the published summary numbers this suite is calibrated
against, then runs each test on synthetic data.
"""
import numpy as np

from refocus.analytics import (
    chi_square_2xk,
    confusion_matrix,
    eta_squared_from_f,
    one_way_anova,
    paired_t_test,
    unpaired_t_test,
)
from refocus.analytics.tracks import Interval, IntervalTrack

print("pattern-attribution contingency (last-before-refocus vs totals):")
result = chi_square_2xk([[19, 7, 14, 16], [50, 47, 50, 55]])
print(f"  chi2 = {result.statistic:.4f}, df = {int(result.df[0])}, "
      f"p = {result.p_value:.4f}, Cramer's V = {result.effect_size:.4f}")

print()
print("duration-weighted confusion matrix from cell durations (minutes):")
minutes = 60.0
aa, ad, da, dd = 435.4, 78.0, 51.4, 70.7
end = (aa + ad + da + dd) * minutes
annotation = IntervalTrack("annotation", [
    Interval(0, (aa + ad) * minutes, "attentive"),
    Interval((aa + ad) * minutes, end, "distracted"),
])
detection = IntervalTrack("detection", [
    Interval(0, aa * minutes, "attentive"),
    Interval(aa * minutes, (aa + ad) * minutes, "distracted"),
    Interval((aa + ad) * minutes, (aa + ad + da) * minutes, "attentive"),
    Interval((aa + ad + da) * minutes, end, "distracted"),
])
cm = confusion_matrix(annotation, detection)
print(f"  accuracy = {cm.accuracy*100:.1f} %, precision = {cm.precision*100:.1f} %")

print()
print("one-way ANOVA internal consistency:")
print(f"  eta2(F=8.5773, df=(2,57)) = {eta_squared_from_f(8.5773, 2, 57):.4f}")

rng = np.random.default_rng(1)
groups = [rng.normal(m, 6.0, 20) for m in (55.0, 58.0, 75.0)]
anova = one_way_anova(groups)
print()
print("ANOVA on three synthetic distracted-time groups:")
print(f"  F({int(anova.test.df[0])}, {int(anova.test.df[1])}) = {anova.test.statistic:.3f}, "
      f"p = {anova.test.p_value:.4f}, eta2 = {anova.test.effect_size:.4f}")
for comparison in anova.post_hoc:
    r = comparison.result
    print(f"  post hoc {comparison.groups}: p = {r.p_value:.4f} (Bonferroni), d = {r.effect_size:+.3f}")

print()
treatment = rng.normal(17.7, 10.5, 30)
control = rng.normal(32.3, 16.9, 30)
t = unpaired_t_test(control, treatment)
print("unpaired t on synthetic recovery times (control vs treatment):")
print(f"  t({int(t.df[0])}) = {t.statistic:.3f}, p = {t.p_value:.2e}, d = {t.effect_size:.3f}")

before = rng.normal(27.0, 9.0, 10)
after = before + rng.normal(-1.0, 5.0, 10)
pt = paired_t_test(before, after)
print()
print("paired t on synthetic workload scores:")
print(f"  t({int(pt.df[0])}) = {pt.statistic:.3f}, p = {pt.p_value:.4f}, d = {pt.effect_size:+.3f}")
