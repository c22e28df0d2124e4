"""Declarative movement scenarios driving the peripheral simulator.

File format (see docs/file-formats.md): one step per line,

    action duration [params...]

with `#` comments and optional `@body_weight N` / `@sample_rate N` directives.
Durations are seconds. Steps run back to back on a single timeline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class ScenarioError(Exception):
    pass


class Action(Enum):
    SIT_IDLE = "sit_idle"
    RISE = "rise"
    STAND_IDLE = "stand_idle"
    LOWER = "lower"
    SHIFT_WEIGHT = "shift_weight"
    LEAN_ON_ARMREST = "lean_on_armrest"
    LIFT_OBJECT = "lift_object"
    PLACE_IN_CUPBOARD = "place_in_cupboard"
    WAIT = "wait"


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"
    BOTH = "both"


@dataclass(frozen=True, slots=True)
class ScenarioStep:
    action: Action
    duration_s: float
    # shift_weight: amplitude in [0,1] of body weight moved
    amplitude: float = 0.0
    # lean_on_armrest: which armrest and what fraction of body weight
    side: Side | None = None
    fraction: float = 0.0
    # lift_object: target height and mid-lift hold time
    height_m: float = 0.0
    hold_s: float = 0.0

    def __post_init__(self):
        if self.duration_s < 0:
            raise ScenarioError("step duration must be non-negative")
        if self.action in (Action.RISE, Action.LOWER) and self.duration_s <= 0:
            raise ScenarioError(f"{self.action.value} duration must be positive")
        if not 0.0 <= self.fraction <= 1.0:
            raise ScenarioError("armrest fraction must be within [0, 1]")
        if not 0.0 <= self.amplitude <= 1.0:
            raise ScenarioError("shift amplitude must be within [0, 1]")
        if self.action is Action.LIFT_OBJECT:
            if self.height_m <= 0:
                raise ScenarioError("lift height must be positive")
            if self.hold_s < 0 or self.hold_s + 1.0 >= self.duration_s:
                raise ScenarioError(
                    "lift step must be at least 1s longer than its hold"
                )


@dataclass(frozen=True)
class ScenarioScript:
    steps: tuple[ScenarioStep, ...]
    body_weight_load: float = 4000.0  # calibrated pressure units
    sample_rate_hz: float = 20.0

    def __post_init__(self):
        if not self.steps:
            raise ScenarioError("scenario needs at least one step")
        if self.body_weight_load <= 0:
            raise ScenarioError("body weight load must be positive")
        if self.sample_rate_hz <= 0:
            raise ScenarioError("sample rate must be positive")

    @property
    def total_duration_s(self) -> float:
        return sum(s.duration_s for s in self.steps)


def sit(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.SIT_IDLE, duration)


def rise(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.RISE, duration)


def stand(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.STAND_IDLE, duration)


def lower(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.LOWER, duration)


def wait(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.WAIT, duration)


def shift_weight(duration: float, amplitude: float) -> ScenarioStep:
    return ScenarioStep(Action.SHIFT_WEIGHT, duration, amplitude=amplitude)


def lean_on_armrest(duration: float, side: Side, fraction: float) -> ScenarioStep:
    return ScenarioStep(Action.LEAN_ON_ARMREST, duration, side=side, fraction=fraction)


def lift_object(duration: float, height_m: float, hold_s: float) -> ScenarioStep:
    return ScenarioStep(Action.LIFT_OBJECT, duration, height_m=height_m, hold_s=hold_s)


def cupboard(duration: float) -> ScenarioStep:
    return ScenarioStep(Action.PLACE_IN_CUPBOARD, duration)


def _parse_step(parts: list[str], lineno: int) -> ScenarioStep:
    name = parts[0].lower()
    try:
        action = Action(name)
    except ValueError:
        raise ScenarioError(f"line {lineno}: unknown action '{name}'") from None
    try:
        duration = float(parts[1])
        args = parts[2:]
        if action is Action.SHIFT_WEIGHT:
            return shift_weight(duration, float(args[0]))
        if action is Action.LEAN_ON_ARMREST:
            return lean_on_armrest(duration, Side(args[0].lower()), float(args[1]))
        if action is Action.LIFT_OBJECT:
            return lift_object(duration, float(args[0]), float(args[1]))
        if args:
            raise ScenarioError(
                f"line {lineno}: {name} takes no extra parameters"
            )
        return ScenarioStep(action, duration)
    except (IndexError, ValueError) as e:
        raise ScenarioError(f"line {lineno}: bad step '{' '.join(parts)}': {e}") from None


def parse_scenario(text: str) -> ScenarioScript:
    steps: list[ScenarioStep] = []
    body_weight = 4000.0
    rate = 20.0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0].startswith("@"):
            try:
                if parts[0] == "@body_weight":
                    body_weight = float(parts[1])
                elif parts[0] == "@sample_rate":
                    rate = float(parts[1])
                else:
                    raise ScenarioError(f"line {lineno}: unknown directive {parts[0]}")
            except (IndexError, ValueError):
                raise ScenarioError(f"line {lineno}: bad directive '{line}'") from None
            continue
        steps.append(_parse_step(parts, lineno))
    return ScenarioScript(tuple(steps), body_weight_load=body_weight, sample_rate_hz=rate)


def load_scenario(path: str | Path) -> ScenarioScript:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from None
    return parse_scenario(text)
