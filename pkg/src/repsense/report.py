"""Weekly summary assembly and rendering, shared by the CLI `report`
subcommand and the UI snapshot endpoint so both surfaces show identical
values. Formatting rules live in format_* helpers; the frontend mirrors them.
"""

from __future__ import annotations

import json
from datetime import date
from statistics import fmean

from .store import MetricsStore


def format_duration(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"

def format_distance(value: float | None) -> str:
    return "-" if value is None else f"{value:.2f}"

def format_grip(value: float | None) -> str:
    return "-" if value is None else f"{value:.1f}"


def weekly_report(store: MetricsStore, week_ending: date, goal_g: int) -> dict:
    days = []
    all_t: list[float] = []
    cb_t: list[float] = []
    cb_dist: list[float] = []
    cb_grip_avg: list[float] = []
    cb_grip_peak: list[float] = []
    cb_singles = 0
    cb_doubles = 0
    for offset in range(6, -1, -1):
        d = date.fromordinal(week_ending.toordinal() - offset)
        m = store.day(d)
        days.append({
            "date": d.isoformat(),
            "d": m.d,
            "s": m.s,
            "met_goal": m.d >= goal_g,
        })
        all_t.extend(dur for dur, _ in m.t)
        cb_t.extend(m.canband.t_cb)
        cb_dist.extend(m.canband.distances_m)
        cb_grip_avg.extend(m.canband.grip_avg_n)
        cb_grip_peak.extend(m.canband.grip_peak_n)
        cb_singles += m.canband.s_cb
        cb_doubles += m.canband.d_cb_count
    return {
        "week_ending": week_ending.isoformat(),
        "goal_g": goal_g,
        "days": days,
        "total_d": sum(day["d"] for day in days),
        "total_s": sum(day["s"] for day in days),
        "adherence_met": sum(1 for day in days if day["met_goal"]),
        "adherence_of": 7,
        "mean_double_time_s": fmean(all_t) if all_t else None,
        "canband": {
            "s_cb": cb_singles,
            "d_cb_count": cb_doubles,
            "mean_t_cb_s": fmean(cb_t) if cb_t else None,
            "mean_distance_m": fmean(cb_dist) if cb_dist else None,
            "grip_avg_n": fmean(cb_grip_avg) if cb_grip_avg else None,
            "grip_peak_n": max(cb_grip_peak) if cb_grip_peak else None,
        },
    }


def render_report_text(report: dict) -> str:
    lines = [
        f"Week ending {report['week_ending']}  (daily double goal G={report['goal_g']})",
        "",
        f"{'date':<12}{'doubles':>8}{'singles':>8}  met",
    ]
    for day in report["days"]:
        met = "yes" if day["met_goal"] else "no"
        lines.append(f"{day['date']:<12}{day['d']:>8}{day['s']:>8}  {met}")
    lines.append(f"{'total':<12}{report['total_d']:>8}{report['total_s']:>8}")
    lines.append("")
    lines.append(
        f"adherence: {report['adherence_met']}/{report['adherence_of']} days met goal"
    )
    lines.append(
        f"mean double time: {format_duration(report['mean_double_time_s'])} s"
    )
    cb = report["canband"]
    lines.append(
        "can band: "
        f"singles {cb['s_cb']}  doubles {cb['d_cb_count']}  "
        f"mean double {format_duration(cb['mean_t_cb_s'])} s  "
        f"distance {format_distance(cb['mean_distance_m'])} m  "
        f"grip avg {format_grip(cb['grip_avg_n'])} N  "
        f"grip peak {format_grip(cb['grip_peak_n'])} N"
    )
    return "\n".join(lines) + "\n"


def render_report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"
