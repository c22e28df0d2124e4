from pathlib import Path

import pytest

from repsense.scenario import ScenarioScript, load_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

SCENARIO_NAMES = [
    "clean_single",
    "clean_double",
    "triple_cycles",
    "reposition_abort",
    "slow_stand_rejected",
    "armrest_double",
    "weight_shift_only",
    "lift_single",
    "lift_double",
    "cupboard_sleep",
    "mixed_day",
    "empty",
]


def scenario(name: str) -> ScenarioScript:
    return load_scenario(SCENARIO_DIR / f"{name}.scn")


@pytest.fixture
def clean_double() -> ScenarioScript:
    return scenario("clean_double")


@pytest.fixture
def store_dir(tmp_path) -> Path:
    return tmp_path / "store"
