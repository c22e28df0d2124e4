"""Weekly goal progression: the days-met rule, prompts, and feedback bundles.

Every seven days the hub counts how many days met the daily double target G.
Three or more met days produce an offer to raise G; fewer produce a
motivational message and G stays put. Execution times are shown as feedback
but never influence the decision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Sequence

from .store import DailyMetrics, QualityMetrics

GOAL_STATE_NAME = "goal.json"

PROMPT_THRESHOLD = 3

DEFAULT_INCREASE_TEMPLATE = (
    "Great job! You've exceeded your daily goal {n} times this week. "
    "Would you like to set a higher goal for next week?"
)
DEFAULT_MOTIVATION_TEMPLATE = (
    "Keep it up! Every repetition counts - see you again tomorrow."
)


class GoalError(Exception):
    pass


class StateError(GoalError):
    """Command arrived in a state that cannot accept it."""


class PromptKind(Enum):
    INCREASE_OFFER = "increase_offer"
    MOTIVATION = "motivation"


class Resolution(Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    DECLINED = "declined"


@dataclass(frozen=True, slots=True)
class PromptRecord:
    kind: PromptKind
    n: int
    issued_at: date
    message: str
    resolution: Resolution = Resolution.PENDING


@dataclass(frozen=True, slots=True)
class GoalState:
    g: int = 1
    step: int = 1
    pending_prompt: PromptRecord | None = None
    week_anchor: date | None = None

    def __post_init__(self):
        if self.g < 1:
            raise GoalError("daily target must be at least 1")
        if self.step < 1:
            raise GoalError("goal step must be at least 1")


def weekly_goal_check(
    g: int,
    doubles: Sequence[int],
    issued_at: date,
    *,
    comparator: str = "at_least",
    increase_template: str = DEFAULT_INCREASE_TEMPLATE,
    motivation_template: str = DEFAULT_MOTIVATION_TEMPLATE,
) -> tuple[int, PromptRecord]:
    """Count days meeting the target and issue the matching prompt.

    Pure in (g, doubles): the caller owns any state change, and G itself is
    only ever changed through accept_prompt.
    """
    if len(doubles) != 7:
        raise GoalError("weekly check needs exactly 7 daily counts")
    if any(d < 0 for d in doubles):
        raise GoalError("daily double counts cannot be negative")
    if comparator == "at_least":
        n = sum(1 for d in doubles if d >= g)
    elif comparator == "exceeds":
        n = sum(1 for d in doubles if d > g)
    else:
        raise GoalError(f"unknown comparator '{comparator}'")
    if n >= PROMPT_THRESHOLD:
        prompt = PromptRecord(
            PromptKind.INCREASE_OFFER, n, issued_at, increase_template.format(n=n, g=g)
        )
    else:
        prompt = PromptRecord(
            PromptKind.MOTIVATION, n, issued_at, motivation_template.format(n=n, g=g)
        )
    return n, prompt


def issue_prompt(state: GoalState, prompt: PromptRecord, anchor: date) -> GoalState:
    """Attach this week's prompt; only increase offers await a decision."""
    pending = prompt if prompt.kind is PromptKind.INCREASE_OFFER else None
    return replace(state, pending_prompt=pending, week_anchor=anchor)


def accept_prompt(
    state: GoalState, decision: Resolution, user_value: int | None = None
) -> tuple[GoalState, PromptRecord]:
    """Resolve a pending increase offer; G never decreases through this path."""
    if state.pending_prompt is None or state.pending_prompt.kind is not PromptKind.INCREASE_OFFER:
        raise StateError("no pending goal offer to resolve")
    if decision is Resolution.ACCEPTED:
        if user_value is not None:
            if user_value <= state.g:
                raise ValueError(f"new target must exceed the current goal {state.g}")
            new_g = user_value
        else:
            new_g = state.g + state.step
    elif decision is Resolution.DECLINED:
        new_g = state.g
    else:
        raise StateError("decision must be accepted or declined")
    resolved = replace(state.pending_prompt, resolution=decision)
    return replace(state, g=new_g, pending_prompt=None), resolved


def save_goal_state(store_dir: str | Path, state: GoalState) -> None:
    doc = {
        "g": state.g,
        "step": state.step,
        "week_anchor": state.week_anchor.isoformat() if state.week_anchor else None,
        "pending_prompt": {
            "kind": state.pending_prompt.kind.value,
            "n": state.pending_prompt.n,
            "issued_at": state.pending_prompt.issued_at.isoformat(),
            "message": state.pending_prompt.message,
            "resolution": state.pending_prompt.resolution.value,
        } if state.pending_prompt else None,
    }
    path = Path(store_dir) / GOAL_STATE_NAME
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_goal_state(store_dir: str | Path) -> GoalState | None:
    path = Path(store_dir) / GOAL_STATE_NAME
    if not path.exists():
        return None
    doc = json.loads(path.read_text())
    prompt = None
    if doc.get("pending_prompt"):
        p = doc["pending_prompt"]
        prompt = PromptRecord(
            PromptKind(p["kind"]), p["n"], date.fromisoformat(p["issued_at"]),
            p["message"], Resolution(p["resolution"]),
        )
    return GoalState(
        g=doc["g"],
        step=doc["step"],
        pending_prompt=prompt,
        week_anchor=date.fromisoformat(doc["week_anchor"]) if doc.get("week_anchor") else None,
    )


def feedback_summary(
    metrics: DailyMetrics, quality: QualityMetrics, state: GoalState
) -> dict:
    """Display bundle for the touchscreen: progress plus quality, goal-neutral.

    Nothing here feeds weekly_goal_check except the doubles counts themselves.
    """
    cb = metrics.canband
    return {
        "date": metrics.day,
        "goal_g": state.g,
        "today_d": metrics.d,
        "today_s": metrics.s,
        "progress": f"{metrics.d}/{state.g}",
        "mean_double_time_s": quality.mean_double_time_s,
        "consistency_cv": quality.consistency_cv,
        "canband_table": {
            "single_lifts": cb.s_cb,
            "double_lifts": cb.d_cb_count,
            "mean_double_lift_s": (
                sum(cb.t_cb) / len(cb.t_cb) if cb.t_cb else None
            ),
            "mean_distance_m": (
                sum(cb.distances_m) / len(cb.distances_m) if cb.distances_m else None
            ),
            "grip_avg_n": (
                sum(cb.grip_avg_n) / len(cb.grip_avg_n) if cb.grip_avg_n else None
            ),
            "grip_peak_n": max(cb.grip_peak_n) if cb.grip_peak_n else None,
        },
        "pending_prompt": state.pending_prompt.message if state.pending_prompt else None,
    }
