"""repsense: a desk-scale simulation of a furniture-embedded strength-rep
sensing ecosystem - simulated pressure/IMU peripherals over a faulty star
network, a hub pipeline that validates sit-to-stand and lift repetitions,
daily metrics with local persistence, and weekly goal progression.
"""

from .detect import (
    DetectionConfig,
    Leaning,
    LiftPhase,
    MoveKind,
    RepetitionEvent,
    RepType,
    Stage,
)
from .goals import GoalState, PromptKind, Resolution, accept_prompt, weekly_goal_check
from .hub import DayPlan, Hub, HubConfig, HubEvent, RunResult, run_days, run_session
from .registry import IngestVerdict, PeripheralStatus, Registry
from .scenario import ScenarioScript, ScenarioStep, load_scenario, parse_scenario
from .simulate import FaultProfile, apply_faults, expected_events, synthesize_streams
from .store import DailyMetrics, MetricsStore, replay_log, symmetry_index
from .wire import (
    CanBandPayload,
    HeartbeatPayload,
    PeripheralId,
    PeripheralKind,
    PeripheralPacket,
    PressureFramePayload,
    decode_packet,
    encode_packet,
)

__version__ = "0.1.0"
