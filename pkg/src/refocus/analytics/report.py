"""Session report: every metric the analysis produces, in one document.

The report is a plain JSON-able dict so downstream tooling can
regenerate table-style summaries (recovery times by condition, pattern
attribution, per-part distracted time, annotation/detection confusion)
without re-parsing logs. Missing inputs produce explicit omissions,
never crashes.
"""
from __future__ import annotations

import math
from dataclasses import asdict
from typing import Sequence

import numpy as np

from ..errors import InsufficientData
from ..events import SessionEvent
from ..sensor.attention import ATTENTIVE, DISTRACTED
from .episodes import Episode, extract_episodes, pattern_attribution
from .stats import TestResult, one_way_anova, unpaired_t_test
from .tracks import IntervalTrack, confusion_matrix, distraction_count, total_distracted_time


def _test_record(test: TestResult) -> dict:
    return {
        "statistic": None if math.isinf(test.statistic) else test.statistic,
        "df": list(test.df),
        "p_value": test.p_value,
        "effect_size": None if math.isinf(test.effect_size) else test.effect_size,
        "effect_name": test.effect_name,
        "note": test.note,
    }


def recovery_time_stats(episodes: Sequence[Episode]) -> dict:
    """Mean/sd of recovery time per condition plus the unpaired t-test.

    Cohen's d is (control mean - treatment mean) / pooled sd, positive
    when the intervention shortens recovery.
    """
    groups: dict[str, list[float]] = {"treatment": [], "control": []}
    for episode in episodes:
        if episode.open or episode.condition not in groups:
            continue
        groups[episode.condition].append(episode.recovery_time)
    summary = {}
    for name, values in groups.items():
        if values:
            summary[name] = {
                "n": len(values),
                "mean_s": float(np.mean(values)),
                "sd_s": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
            }
        else:
            summary[name] = {"n": 0, "mean_s": None, "sd_s": None}
    if len(groups["treatment"]) < 2 or len(groups["control"]) < 2:
        raise InsufficientData("recovery-time test needs 2+ episodes per condition")
    test = unpaired_t_test(groups["control"], groups["treatment"])
    return {"groups": summary, "test": _test_record(test)}


def _parts(events: list[SessionEvent]) -> list[dict]:
    """Part windows from mode_set boundaries, closed by session_end."""
    parts = []
    last_t = events[-1].t if events else 0.0
    end_t = next((e.t for e in events if e.type == "session_end"), last_t)
    for event in events:
        if event.type == "mode_set":
            if parts:
                parts[-1]["end"] = event.t
            parts.append({
                "part": event.payload.get("part", len(parts)),
                "mode": event.payload.get("mode"),
                "start": event.t,
                "end": end_t,
            })
    if not parts and events:
        parts.append({"part": 0, "mode": None, "start": events[0].t, "end": end_t})
    return [p for p in parts if p["end"] > p["start"]]


def _changes(events: list[SessionEvent], kinds: tuple[str, ...]) -> list[tuple[float, str]]:
    changes = []
    for event in events:
        if event.type not in kinds:
            continue
        if event.type == "annotation":
            mark = event.payload.get("mark")
            if mark == "distraction_start":
                changes.append((event.t, DISTRACTED))
            elif mark == "refocus":
                changes.append((event.t, ATTENTIVE))
        else:
            state = event.payload.get("state")
            if state in (ATTENTIVE, DISTRACTED):
                changes.append((event.t, state))
    return changes


def annotation_track(events: list[SessionEvent], span: tuple[float, float]) -> IntervalTrack:
    return IntervalTrack.from_changes("annotation", span, _changes(events, ("annotation",)))


def detection_track(events: list[SessionEvent], span: tuple[float, float]) -> IntervalTrack:
    return IntervalTrack.from_changes(
        "detection", span, _changes(events, ("attention_state", "detection_change"))
    )


def build_report(
    events: list[SessionEvent],
    detections: list[SessionEvent] | None = None,
    session_id: str | None = None,
) -> dict:
    """Assemble the full analysis document for one session log."""
    report: dict = {"session_id": session_id, "omissions": []}
    merged = list(events)
    if detections:
        merged = sorted(merged + list(detections), key=lambda e: e.t)

    episodes = extract_episodes(merged)
    closed = [e for e in episodes if not e.open]
    report["episodes"] = {
        "count": len(episodes),
        "open_count": len(episodes) - len(closed),
        "recovery_times_s": [e.recovery_time for e in closed],
    }

    try:
        report["recovery"] = recovery_time_stats(episodes)
    except InsufficientData as exc:
        report["recovery"] = None
        report["omissions"].append(f"recovery: {exc}")

    try:
        attribution = pattern_attribution(episodes)
        report["pattern_attribution"] = {
            "last_before_refocus": attribution.last_counts,
            "total_occurrence": attribution.total_counts,
            "test": _test_record(attribution.test),
        }
    except (InsufficientData, ValueError) as exc:
        report["pattern_attribution"] = None
        report["omissions"].append(f"pattern_attribution: {exc}")

    parts = _parts(merged)
    report["parts"] = []
    annotation_events = [e for e in merged if e.type == "annotation"]
    detection_events = [e for e in merged if e.type in ("attention_state", "detection_change")]
    for part in parts:
        span = (part["start"], part["end"])
        entry = dict(part)
        if annotation_events:
            track = annotation_track(merged, span)
            entry["annotation"] = {
                "total_distracted_s": total_distracted_time(track),
                "distraction_count": distraction_count(track),
            }
        else:
            entry["annotation"] = None
        if detection_events:
            track = detection_track(merged, span)
            entry["detection"] = {
                "total_distracted_s": total_distracted_time(track),
                "distraction_count": distraction_count(track),
            }
        else:
            entry["detection"] = None
        if annotation_events and detection_events:
            cm = confusion_matrix(annotation_track(merged, span), detection_track(merged, span))
            entry["confusion"] = cm.to_record()
        else:
            entry["confusion"] = None
        report["parts"].append(entry)
    if not annotation_events:
        report["omissions"].append("annotation track: no annotation events")
    if not detection_events:
        report["omissions"].append("detection track: no detection events")

    if annotation_events and detection_events and parts:
        total = None
        for part in parts:
            span = (part["start"], part["end"])
            cm = confusion_matrix(annotation_track(merged, span), detection_track(merged, span))
            total = cm if total is None else total + cm
        report["confusion_overall"] = total.to_record()
    else:
        report["confusion_overall"] = None

    by_mode: dict[str, list[float]] = {}
    for entry in report["parts"]:
        if entry["mode"] and entry["annotation"]:
            by_mode.setdefault(entry["mode"], []).append(entry["annotation"]["total_distracted_s"])
    report["distracted_time_by_mode"] = {
        mode: {"n": len(vals), "mean_s": float(np.mean(vals))} for mode, vals in by_mode.items()
    }
    if len(by_mode) >= 2 and all(len(v) >= 2 for v in by_mode.values()):
        anova = one_way_anova(list(by_mode.values()))
        report["distracted_time_anova"] = {
            "modes": list(by_mode.keys()),
            "test": _test_record(anova.test),
            "post_hoc": [
                {"pair": list(c.groups), **_test_record(c.result)} for c in anova.post_hoc
            ],
        }
    else:
        report["distracted_time_anova"] = None

    return report


def render_text(report: dict) -> str:
    """Small fixed-width rendering of the headline numbers."""
    lines = [f"session: {report.get('session_id')}"]
    episodes = report.get("episodes", {})
    lines.append(
        f"episodes: {episodes.get('count', 0)} ({episodes.get('open_count', 0)} open)"
    )
    recovery = report.get("recovery")
    if recovery:
        for name, group in recovery["groups"].items():
            if group["n"]:
                lines.append(
                    f"  recovery {name:<10} n={group['n']:<4} mean={group['mean_s']:.2f}s sd={group['sd_s']:.2f}s"
                )
        test = recovery["test"]
        lines.append(
            f"  unpaired t: t={test['statistic']:.4f} df={test['df'][0]} p={test['p_value']:.4f} d={test['effect_size']:.4f}"
        )
    attribution = report.get("pattern_attribution")
    if attribution:
        lines.append("pattern attribution (last before refocus / total):")
        for name in attribution["last_before_refocus"]:
            lines.append(
                f"  {name:<14} {attribution['last_before_refocus'][name]:>4} / {attribution['total_occurrence'][name]:>4}"
            )
        test = attribution["test"]
        lines.append(
            f"  chi2={test['statistic']:.4f} df={test['df'][0]} p={test['p_value']:.4f} V={test['effect_size']:.4f}"
        )
    for part in report.get("parts", []):
        mode = part.get("mode") or "?"
        lines.append(f"part {part['part']} [{mode}] {part['start']:.1f}-{part['end']:.1f}s")
        for source in ("annotation", "detection"):
            data = part.get(source)
            if data:
                lines.append(
                    f"  {source:<10} distracted={data['total_distracted_s']:.1f}s count={data['distraction_count']}"
                )
        if part.get("confusion"):
            cm = part["confusion"]
            lines.append(
                f"  confusion  acc={cm['accuracy']*100:.1f}% prec={cm['precision']*100:.1f}%"
            )
    overall = report.get("confusion_overall")
    if overall:
        lines.append(
            f"overall confusion: acc={overall['accuracy']*100:.1f}% prec={overall['precision']*100:.1f}%"
        )
    return "\n".join(lines) + "\n"


def _svg_bar_chart(title: str, labels: list[str], values: list[float], unit: str) -> str:
    """Minimal static SVG bar chart, one bar per label."""
    width, height, pad = 480, 280, 48
    vmax = max(values) if values and max(values) > 0 else 1.0
    n = len(values)
    slot = (width - 2 * pad) / max(n, 1)
    bar_w = slot * 0.6
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{width/2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        f'<line x1="{pad}" y1="{height-pad}" x2="{width-pad}" y2="{height-pad}" stroke="black"/>',
    ]
    for i, (label, value) in enumerate(zip(labels, values)):
        h = (height - 2 * pad) * value / vmax
        x = pad + i * slot + (slot - bar_w) / 2
        y = height - pad - h
        parts.append(f'<rect x="{x:.1f}" y="{y:.1f}" width="{bar_w:.1f}" height="{h:.1f}" fill="#4878a8"/>')
        parts.append(
            f'<text x="{x + bar_w/2:.1f}" y="{height-pad+16}" text-anchor="middle" font-size="11">{label}</text>'
        )
        parts.append(
            f'<text x="{x + bar_w/2:.1f}" y="{y-4:.1f}" text-anchor="middle" font-size="11">{value:.1f}{unit}</text>'
        )
    parts.append("</svg>")
    return "".join(parts)


def render_svg_charts(report: dict) -> dict[str, str]:
    """Bar charts of the summary measures, keyed by chart name."""
    charts = {}
    by_mode = report.get("distracted_time_by_mode") or {}
    if by_mode:
        labels = list(by_mode.keys())
        charts["distracted_time"] = _svg_bar_chart(
            "Total distracted time by condition",
            labels,
            [by_mode[m]["mean_s"] for m in labels],
            "s",
        )
    counts: dict[str, list[float]] = {}
    for part in report.get("parts", []):
        if part.get("mode") and part.get("annotation"):
            counts.setdefault(part["mode"], []).append(part["annotation"]["distraction_count"])
    if counts:
        labels = list(counts.keys())
        charts["distraction_count"] = _svg_bar_chart(
            "Distraction count by condition",
            labels,
            [float(np.mean(counts[m])) for m in labels],
            "",
        )
    recovery = report.get("recovery")
    if recovery:
        labels = [n for n, g in recovery["groups"].items() if g["n"]]
        charts["recovery_time"] = _svg_bar_chart(
            "Mean recovery time by condition",
            labels,
            [recovery["groups"][n]["mean_s"] for n in labels],
            "s",
        )
    return charts
