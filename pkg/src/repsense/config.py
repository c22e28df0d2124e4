"""Deployment configuration: one TOML file covering detection thresholds,
network behaviour, goal rules, prompt templates, store path and serve port.

Every key is optional; defaults reproduce the stock desk-scale deployment.
See docs/file-formats.md for the full annotated schema.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .detect import DetectionConfig
from .goals import DEFAULT_INCREASE_TEMPLATE, DEFAULT_MOTIVATION_TEMPLATE, GoalState
from .hub import HubConfig
from .simulate import FaultProfile
from .wire import PeripheralId, PeripheralKind


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class GoalRules:
    initial_target: int = 1
    step: int = 1
    comparator: str = "at_least"
    increase_template: str = DEFAULT_INCREASE_TEMPLATE
    motivation_template: str = DEFAULT_MOTIVATION_TEMPLATE

    def initial_state(self) -> GoalState:
        return GoalState(g=self.initial_target, step=self.step)


@dataclass(frozen=True)
class AppConfig:
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    hub: HubConfig = field(default_factory=HubConfig)
    goals: GoalRules = field(default_factory=GoalRules)
    faults: FaultProfile = field(default_factory=FaultProfile)
    store_path: str = "./repsense-store"
    port: int = 8765


def _build(cls, table: dict, where: str):
    allowed = {f.name for f in fields(cls)}
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(f"unknown {where} keys: {sorted(unknown)}")
    try:
        return cls(**table)
    except Exception as e:
        raise ConfigError(f"bad {where} config: {e}") from e


def parse_peripheral(name: str) -> PeripheralId:
    kind, _, instance = name.partition(":")
    try:
        return PeripheralId(PeripheralKind[kind.upper()], int(instance or 0))
    except (KeyError, ValueError):
        raise ConfigError(f"bad peripheral name '{name}'") from None


def parse_fault_table(table: dict) -> FaultProfile:
    dropouts: dict[PeripheralId, tuple[tuple[float, float], ...]] = {}
    for entry in table.pop("dropout", []):
        pid = parse_peripheral(entry["peripheral"])
        window = (float(entry["start_s"]), float(entry["end_s"]))
        dropouts[pid] = dropouts.get(pid, ()) + (window,)
    return _build(FaultProfile, {**table, "dropout_windows": dropouts}, "faults")


def load_fault_profile(path: str | Path) -> FaultProfile:
    try:
        with open(path, "rb") as fh:
            table = tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read fault profile {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"bad fault profile {path}: {e}") from None
    return parse_fault_table(table)


def load_config(path: str | Path | None = None) -> AppConfig:
    if path is None:
        return AppConfig()
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"bad config {path}: {e}") from None

    known = {"detection", "network", "goals", "faults", "store", "serve"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")

    goals_table = dict(doc.get("goals", {}))
    prompts = goals_table.pop("prompts", {})
    if "increase_offer" in prompts:
        goals_table["increase_template"] = prompts["increase_offer"]
    if "motivation" in prompts:
        goals_table["motivation_template"] = prompts["motivation"]

    return AppConfig(
        detection=_build(DetectionConfig, doc.get("detection", {}), "detection"),
        hub=_build(HubConfig, doc.get("network", {}), "network"),
        goals=_build(GoalRules, goals_table, "goals"),
        faults=parse_fault_table(dict(doc.get("faults", {}))),
        store_path=doc.get("store", {}).get("path", "./repsense-store"),
        port=int(doc.get("serve", {}).get("port", 8765)),
    )
