"""Two simulated weeks at virtual speed: daily metrics accumulate, the weekly
check fires twice, and the event log replays into the exact same aggregates.
"""

import tempfile
from datetime import date, timedelta
from pathlib import Path

from repsense.goals import Resolution, accept_prompt
from repsense.hub import DayPlan, run_days
from repsense.report import render_report_text, weekly_report
from repsense.scenario import load_scenario
from repsense.store import MetricsStore, aggregates_json, replay_log

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"
week_plan = ["mixed_day", "clean_double", "clean_single", "lift_double",
             "armrest_double", "empty", "triple_cycles"]

with tempfile.TemporaryDirectory() as td:
    store = MetricsStore(td)
    plans = [
        DayPlan(day=date(2026, 1, 5) + timedelta(days=i),
                script=load_scenario(SCENARIOS / f"{week_plan[i % 7]}.scn"),
                seed=300 + i)
        for i in range(14)
    ]
    result = run_days(plans, store=store)

    print("fourteen virtual days:")
    for day, metrics in sorted(store.days().items()):
        cb = metrics.canband
        print(f"  {day}: S={metrics.s} D={metrics.d} "
              f"lifts {cb.s_cb}/{cb.d_cb_count}")

    print("\nweekly checks:")
    for prompt in result.prompts:
        print(f"  {prompt.issued_at}: {prompt.kind.value} (N={prompt.n})")

    goal = result.goal_state
    if goal.pending_prompt is not None:
        goal, record = accept_prompt(goal, Resolution.ACCEPTED)
        print(f"  user accepts -> daily target now G={goal.g}")

    print()
    print(render_report_text(weekly_report(store, date(2026, 1, 11), goal.g)))

    live = store.aggregates_bytes()
    rebuilt = aggregates_json(replay_log(store.log_path))
    print(f"log replay reproduces aggregates byte-for-byte: {live == rebuilt}")
    store.close()
