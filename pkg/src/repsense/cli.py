"""Command line entry points.

    repsense simulate --scenario FILE [--faults FILE] [--seed N] [--realtime|--fast]
                      [--store DIR] [--days N] [--pause T0:T1] [--config FILE]
    repsense replay   --log FILE
    repsense serve    --port N --store DIR [--scenario FILE] [--config FILE]
    repsense report   --store DIR [--week DATE] [--goal N] [--json]

Exit codes: 0 success, 1 usage error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import sys
from datetime import date, datetime, timedelta

from .config import AppConfig, ConfigError, load_config, load_fault_profile
from .goals import load_goal_state, save_goal_state
from .hub import DayPlan, Hub, run_days, run_session
from .detect import MoveKind, RepType
from .report import render_report_json, render_report_text, weekly_report
from .scenario import ScenarioError, load_scenario
from .simulate import FaultError, synthesize_streams
from .store import MetricsStore, StoreError, aggregates_json, replay_log

USAGE_EXIT = 1
RUNTIME_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we reserve that
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(USAGE_EXIT)


def _parse_pause(spec: str) -> tuple[float, float]:
    try:
        start, _, end = spec.partition(":")
        t0, t1 = float(start), float(end)
    except ValueError:
        raise argparse.ArgumentTypeError("pause must look like START:END seconds")
    if t1 <= t0:
        raise argparse.ArgumentTypeError("pause must end after it starts")
    return t0, t1


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="repsense", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sim = sub.add_parser("simulate", help="run a scenario end to end through the hub")
    sim.add_argument("--scenario", required=True, help="scenario script file (.scn)")
    sim.add_argument("--faults", help="fault profile TOML")
    sim.add_argument("--seed", type=int, default=0)
    mode = sim.add_mutually_exclusive_group()
    mode.add_argument("--realtime", action="store_true", help="pace against the wall clock")
    mode.add_argument("--fast", action="store_true", help="virtual clock (default)")
    sim.add_argument("--store", help="metrics store directory")
    sim.add_argument("--config", help="deployment config TOML")
    sim.add_argument("--start", help="session start (ISO datetime, default 2026-01-05T09:00)")
    sim.add_argument("--days", type=int, default=1, help="repeat over N consecutive days")
    sim.add_argument("--pause", action="append", type=_parse_pause, default=[],
                     metavar="T0:T1", help="suspend logging between two session times")

    rep = sub.add_parser("replay", help="rebuild daily aggregates from an event log")
    rep.add_argument("--log", required=True, help="events.ldjson path")

    srv = sub.add_parser("serve", help="run the hub service for the touchscreen UI")
    srv.add_argument("--port", type=int, default=None)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--store", required=True)
    srv.add_argument("--scenario", help="drive this scenario in realtime")
    srv.add_argument("--seed", type=int, default=0)
    srv.add_argument("--config", help="deployment config TOML")
    srv.add_argument("--static", help="directory of built UI assets to serve")

    rpt = sub.add_parser("report", help="print the weekly summary table")
    rpt.add_argument("--store", required=True)
    rpt.add_argument("--week", help="week-ending date (ISO, default: latest day in store)")
    rpt.add_argument("--goal", type=int, help="daily double goal (default: stored goal state)")
    rpt.add_argument("--json", action="store_true", help="machine-readable output")
    return parser


def _load_app_config(path: str | None) -> AppConfig:
    return load_config(path)


def _summarize(counts: dict, late: int, dup: int) -> str:
    def plural(n, word):
        return f"{n} {word}{'' if n == 1 else 's'}"

    return (
        f"sit-to-stand: {plural(counts['d'], 'double')}, {plural(counts['s'], 'single')}\n"
        f"lifts: {plural(counts['d_cb'], 'double')}, {plural(counts['s_cb'], 'single')}\n"
        f"transport: {late} late drops, {dup} duplicates"
    )


def cmd_simulate(args) -> int:
    app = _load_app_config(args.config)
    script = load_scenario(args.scenario)
    faults = load_fault_profile(args.faults) if args.faults else app.faults
    store = MetricsStore(args.store) if args.store else None
    start = datetime.fromisoformat(args.start) if args.start else datetime(2026, 1, 5, 9, 0)
    commands = [c for t0, t1 in args.pause for c in ((t0, "pause", None), (t1, "resume", None))]
    goal = app.goals.initial_state()
    if args.store:
        goal = load_goal_state(args.store) or goal

    if args.days > 1:
        if store is None:
            print("simulate: --days needs --store", file=sys.stderr)
            return USAGE_EXIT
        plans = [
            DayPlan(day=start.date() + timedelta(days=i), script=script,
                    seed=args.seed + i, faults=faults, commands=commands)
            for i in range(args.days)
        ]
        result = run_days(plans, detection=app.detection, hub_config=app.hub,
                          store=store, goal_state=goal, start_time=start.time())
        totals = {"s": 0, "d": 0, "s_cb": 0, "d_cb": 0}
        for run in result.runs:
            for k in totals:
                totals[k] += run.counts[k]
        late = sum(r.hub.buffer.late_drops for r in result.runs)
        dup = sum(r.hub.duplicates for r in result.runs)
        print(f"{args.days} days x {script.total_duration_s:.1f} s, seed {args.seed}")
        print(_summarize(totals, late, dup))
        for prompt in result.prompts:
            print(f"week {prompt.issued_at}: {prompt.kind.value} (N={prompt.n})")
        save_goal_state(args.store, result.goal_state)
        print(f"goal G={result.goal_state.g}")
    else:
        result = run_session(
            script, seed=args.seed, faults=faults, detection=app.detection,
            hub_config=app.hub, store=store, session_start=start,
            goal_state=goal, realtime=args.realtime, commands=commands,
        )
        mode = "realtime" if args.realtime else "fast"
        print(f"{args.scenario}: {script.total_duration_s:.1f} s, seed {args.seed}, {mode}")
        print(_summarize(result.counts, result.hub.buffer.late_drops, result.hub.duplicates))
        if args.realtime and result.latencies_ms:
            lat = sorted(result.latencies_ms)
            p95 = lat[max(0, int(0.95 * len(lat)) - 1)]
            print(f"latency: p95 {p95:.0f} ms over {len(lat)} events")
    if store is not None:
        print(f"store: {store.root}")
        store.close()
    return 0


def cmd_replay(args) -> int:
    days = replay_log(args.log)
    events = sum(1 for _ in open(args.log)) if days else 0
    sys.stdout.write(aggregates_json(days).decode())
    print(f"replayed {events} events into {len(days)} days", file=sys.stderr)
    return 0


def cmd_serve(args) -> int:
    from .server import serve  # aiohttp import deferred to keep simulate light

    app = _load_app_config(args.config)
    store = MetricsStore(args.store)
    goal = load_goal_state(args.store) or app.goals.initial_state()
    hub = Hub(detection=app.detection, hub_config=app.hub, store=store,
              session_start=datetime.now().replace(microsecond=0),
              goal_state=goal)
    sim = None
    if args.scenario:
        script = load_scenario(args.scenario)
        sim = synthesize_streams(script, args.seed, app.detection)
    port = args.port if args.port is not None else app.port
    print(f"serving on http://{args.host}:{port} (ws at /ws)")
    try:
        serve(hub, host=args.host, port=port, static_dir=args.static, sim=sim,
              faults=app.faults)
    finally:
        save_goal_state(args.store, hub.goal_state)
        store.close()
    return 0


def cmd_report(args) -> int:
    store = MetricsStore(args.store)
    try:
        days = store.days()
        if args.week:
            end = date.fromisoformat(args.week)
        elif days:
            end = date.fromisoformat(max(days))
        else:
            end = date.today()
        goal = args.goal
        if goal is None:
            state = load_goal_state(args.store)
            goal = state.g if state else 1
        report = weekly_report(store, end, goal)
        out = render_report_json(report) if args.json else render_report_text(report)
        sys.stdout.write(out)
    finally:
        store.close()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "replay": cmd_replay,
        "serve": cmd_serve,
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (ScenarioError, ConfigError, FaultError, StoreError) as e:
        print(f"repsense {args.command}: {e}", file=sys.stderr)
        return RUNTIME_EXIT
    except OSError as e:
        print(f"repsense {args.command}: {e}", file=sys.stderr)
        return RUNTIME_EXIT
    except KeyboardInterrupt:
        return 0


if __name__ == "__main__":
    sys.exit(main())
