from .episodes import Episode, PatternAttribution, extract_episodes, pattern_attribution
from .report import (
    annotation_track,
    build_report,
    detection_track,
    recovery_time_stats,
    render_svg_charts,
    render_text,
)
from .special import chi2_sf, f_sf, reg_inc_beta, reg_inc_gamma_p, reg_inc_gamma_q, student_t_sf
from .stats import (
    AnovaResult,
    PairwiseComparison,
    TestResult,
    chi_square_2xk,
    eta_squared_from_f,
    one_way_anova,
    paired_t_test,
    pooled_sd,
    unpaired_t_test,
)
from .tracks import (
    ConfusionMatrix,
    Interval,
    IntervalTrack,
    confusion_matrix,
    distraction_count,
    total_distracted_time,
)

__all__ = [
    "AnovaResult",
    "ConfusionMatrix",
    "Episode",
    "Interval",
    "IntervalTrack",
    "PairwiseComparison",
    "PatternAttribution",
    "TestResult",
    "annotation_track",
    "build_report",
    "chi2_sf",
    "chi_square_2xk",
    "confusion_matrix",
    "detection_track",
    "distraction_count",
    "eta_squared_from_f",
    "extract_episodes",
    "f_sf",
    "one_way_anova",
    "paired_t_test",
    "pattern_attribution",
    "pooled_sd",
    "recovery_time_stats",
    "reg_inc_beta",
    "reg_inc_gamma_p",
    "reg_inc_gamma_q",
    "render_svg_charts",
    "render_text",
    "student_t_sf",
    "total_distracted_time",
    "unpaired_t_test",
]
