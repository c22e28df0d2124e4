import pytest

from repsense.scenario import (
    Action,
    ScenarioError,
    ScenarioScript,
    Side,
    parse_scenario,
    rise,
    sit,
)


def test_parse_basic_script():
    script = parse_scenario("sit_idle 5\nrise 2\nstand_idle 3\nlower 2\nsit_idle 5\n")
    assert [s.action for s in script.steps] == [
        Action.SIT_IDLE, Action.RISE, Action.STAND_IDLE, Action.LOWER, Action.SIT_IDLE,
    ]
    assert script.total_duration_s == 17.0


def test_comments_and_blank_lines_ignored():
    script = parse_scenario("# intro\n\nsit_idle 5  # trailing\n")
    assert len(script.steps) == 1


def test_directives_override_defaults():
    script = parse_scenario("@body_weight 2500\n@sample_rate 40\nsit_idle 1\n")
    assert script.body_weight_load == 2500
    assert script.sample_rate_hz == 40


def test_parameters_parsed():
    script = parse_scenario(
        "sit_idle 1\n"
        "shift_weight 4 0.3\n"
        "lean_on_armrest 0 left 0.25\n"
        "lift_object 4 0.4 1\n"
    )
    shift, lean, lift = script.steps[1:]
    assert shift.amplitude == 0.3
    assert lean.side is Side.LEFT and lean.fraction == 0.25
    assert lift.height_m == 0.4 and lift.hold_s == 1.0


@pytest.mark.parametrize("text", [
    "",                       # no steps at all
    "hop 3",                  # unknown action
    "rise 0",                 # rise must take time
    "sit_idle -2",            # negative duration
    "shift_weight 4 1.5",     # amplitude out of range
    "lean_on_armrest 0 left 2",
    "lift_object 2 0.4 1.5",  # hold leaves no room to move
    "lift_object 4 0.4",      # missing parameter
    "sit_idle 5 9",           # stray parameter
    "@sample_rate x",
])
def test_bad_scripts_rejected(text):
    with pytest.raises(ScenarioError):
        parse_scenario(text)


def test_empty_step_list_rejected():
    with pytest.raises(ScenarioError):
        ScenarioScript(())


def test_builders_match_parser():
    script = parse_scenario("sit_idle 5\nrise 2\n")
    assert script.steps == (sit(5), rise(2))
