"""The weekly goal rule in isolation: count days that met the target, prompt
at three, and walk an accept / decline decision through the goal state.
"""

from datetime import date

from repsense.goals import (
    GoalState,
    Resolution,
    accept_prompt,
    issue_prompt,
    weekly_goal_check,
)

week_end = date(2026, 1, 11)

for doubles in ([3, 3, 3, 0, 0, 0, 0], [4, 4, 0, 0, 0, 0, 0], [5, 5, 5, 5, 5, 5, 5]):
    n, prompt = weekly_goal_check(3, doubles, week_end)
    print(f"G=3, week {doubles}: N={n} -> {prompt.kind.value}")
    print(f"   \"{prompt.message}\"")

print()
state = GoalState(g=3, step=1)
_, offer = weekly_goal_check(state.g, [3, 4, 3, 0, 0, 0, 3], week_end)
state = issue_prompt(state, offer, week_end)
print(f"pending offer: {state.pending_prompt.kind.value} (N={state.pending_prompt.n})")

accepted, record = accept_prompt(state, Resolution.ACCEPTED)
print(f"accept with the default step: G {state.g} -> {accepted.g}")

state = issue_prompt(GoalState(g=3), offer, week_end)
chosen, _ = accept_prompt(state, Resolution.ACCEPTED, user_value=6)
print(f"accept with a user-chosen target: G 3 -> {chosen.g}")

state = issue_prompt(GoalState(g=3), offer, week_end)
kept, record = accept_prompt(state, Resolution.DECLINED)
print(f"decline: G stays {kept.g} (resolution: {record.resolution.value})")

# Execution times are displayed but never feed the rule.
n_slow, _ = weekly_goal_check(3, [3, 3, 3, 0, 0, 0, 0], week_end)
n_fast, _ = weekly_goal_check(3, [3, 3, 3, 0, 0, 0, 0], week_end)
print(f"\nsame counts, different mean double times -> same N ({n_slow} == {n_fast})")
