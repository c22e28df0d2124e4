"""UI-facing service: a WebSocket channel pushing hub events and accepting
commands, plus snapshot/report endpoints. Message schemas are documented in
docs/ui-messages.md; the browser frontend under frontend/ consumes them.

The hub is mutated by at most one driver thread; the server serializes its own
reads and commands against it with a lock.
"""

from __future__ import annotations

import asyncio
import json
import threading
import time as _time
from datetime import date, datetime
from pathlib import Path

from aiohttp import WSMsgType, web

from .goals import StateError, feedback_summary
from .hub import Hub, HubEvent
from .report import weekly_report
from .simulate import SimulationResult, apply_faults, FaultProfile
from .store import quality_of
from .wire import encode_packet

COMMANDS = {"pause", "resume", "mask_on", "mask_off", "accept_goal",
            "decline_goal", "recalibrate"}

SERVICE_KEY: web.AppKey["HubService"] = web.AppKey("service")


def event_message(event: HubEvent) -> dict:
    return {
        "type": "event",
        "event": {
            "seq": event.seq,
            "kind": event.kind,
            "at": event.at,
            "payload": event.payload,
        },
    }


class HubService:
    """Bridges one Hub into an aiohttp app: fanout, commands, snapshots."""

    def __init__(self, hub: Hub, goal_rules=None):
        self.hub = hub
        self.goal_rules = goal_rules
        self.lock = threading.Lock()
        self.loop: asyncio.AbstractEventLoop | None = None
        self._queues: set[asyncio.Queue] = set()
        hub.bus.subscribe(self._on_event)

    def _on_event(self, event: HubEvent) -> None:
        if self.loop is None:
            return
        msg = event_message(event)
        for q in list(self._queues):
            self.loop.call_soon_threadsafe(q.put_nowait, msg)

    def snapshot(self) -> dict:
        with self.lock:
            session = self.hub.snapshot()
            store = self.hub.store
            today = self.hub.session_start.date()
            weekly = weekly_report(store, today, self.hub.goal_state.g) if store else None
            metrics = store.day(today) if store else None
            feedback = (
                feedback_summary(metrics, quality_of(metrics), self.hub.goal_state)
                if metrics is not None else None
            )
        return {"session": session, "weekly": weekly, "feedback": feedback}

    def command(self, name: str, value: int | None = None) -> dict:
        with self.lock:
            return self.hub.command(name, value)


async def _ws_handler(request: web.Request) -> web.WebSocketResponse:
    service: HubService = request.app[SERVICE_KEY]
    ws = web.WebSocketResponse(heartbeat=30)
    await ws.prepare(request)
    queue: asyncio.Queue = asyncio.Queue()
    service._queues.add(queue)

    async def pump():
        while True:
            msg = await queue.get()
            await ws.send_json(msg)

    pump_task = asyncio.create_task(pump())
    try:
        await ws.send_json({"type": "hello", "snapshot": service.snapshot()})
        async for msg in ws:
            if msg.type != WSMsgType.TEXT:
                continue
            try:
                doc = json.loads(msg.data)
            except json.JSONDecodeError:
                await ws.send_json({"type": "error", "message": "bad json"})
                continue
            mtype = doc.get("type")
            if mtype == "subscribe":
                since = int(doc.get("since_seq", 0))
                with service.lock:
                    replayed = service.hub.bus.replay_from(since)
                for event in replayed:
                    await ws.send_json(event_message(event))
            elif mtype == "command":
                name = doc.get("command")
                if name not in COMMANDS:
                    await ws.send_json({
                        "type": "error", "command": name,
                        "message": f"unknown command '{name}'",
                    })
                    continue
                try:
                    snapshot = service.command(name, doc.get("value"))
                except (StateError, ValueError) as e:
                    await ws.send_json({
                        "type": "error", "command": name, "message": str(e),
                    })
                    continue
                await ws.send_json({
                    "type": "ack", "command": name, "session": snapshot,
                })
            else:
                await ws.send_json({"type": "error", "message": "unknown message type"})
    finally:
        pump_task.cancel()
        service._queues.discard(queue)
    return ws


async def _snapshot_handler(request: web.Request) -> web.Response:
    service: HubService = request.app[SERVICE_KEY]
    return web.json_response(service.snapshot())


async def _report_handler(request: web.Request) -> web.Response:
    service: HubService = request.app[SERVICE_KEY]
    week = request.query.get("week")
    try:
        end = date.fromisoformat(week) if week else service.hub.session_start.date()
    except ValueError:
        raise web.HTTPBadRequest(text="week must be an ISO date")
    with service.lock:
        if service.hub.store is None:
            raise web.HTTPNotFound(text="no store attached")
        report = weekly_report(service.hub.store, end, service.hub.goal_state.g)
    return web.json_response(report)


def build_app(service: HubService, static_dir: str | Path | None = None) -> web.Application:
    app = web.Application()
    app[SERVICE_KEY] = service
    app.router.add_get("/ws", _ws_handler)
    app.router.add_get("/snapshot", _snapshot_handler)
    app.router.add_get("/report", _report_handler)
    static = Path(static_dir) if static_dir else None
    if static and static.is_dir():
        async def index(_request):
            return web.FileResponse(static / "index.html")
        app.router.add_get("/", index)
        app.router.add_static("/", static)
    return app


def drive_hub_realtime(
    hub: Hub,
    sim: SimulationResult,
    lock: threading.Lock,
    stop: threading.Event,
    faults: FaultProfile | None = None,
    fault_seed: int = 0,
) -> None:
    """Feed a simulated scenario into a served hub at wall-clock pace."""
    arrivals = apply_faults(sim.streams, faults or FaultProfile(), fault_seed)
    start = _time.perf_counter()
    for arrival in arrivals:
        if stop.is_set():
            return
        while (_time.perf_counter() - start) < arrival.at:
            if stop.is_set():
                return
            _time.sleep(min(max(arrival.at - (_time.perf_counter() - start), 0.0), 0.05))
        with lock:
            hub.tick(arrival.at)
            hub.ingest_bytes(encode_packet(arrival.packet), arrival.at)
    with lock:
        hub.finish(sim.script.total_duration_s)


def serve(
    hub: Hub,
    *,
    host: str = "127.0.0.1",
    port: int = 8765,
    static_dir: str | Path | None = None,
    sim: SimulationResult | None = None,
    faults: FaultProfile | None = None,
    ready: threading.Event | None = None,
) -> None:
    """Run the UI service until interrupted; raises OSError if the port is taken."""
    service = HubService(hub)
    app = build_app(service, static_dir)
    loop = asyncio.new_event_loop()
    asyncio.set_event_loop(loop)
    service.loop = loop
    runner = web.AppRunner(app)
    loop.run_until_complete(runner.setup())
    site = web.TCPSite(runner, host, port)
    loop.run_until_complete(site.start())  # OSError propagates on busy ports

    stop = threading.Event()
    driver = None
    if sim is not None:
        driver = threading.Thread(
            target=drive_hub_realtime, args=(hub, sim, service.lock, stop, faults),
            daemon=True,
        )
        driver.start()
    if ready is not None:
        ready.set()
    try:
        loop.run_forever()
    except KeyboardInterrupt:
        pass
    finally:
        stop.set()
        if driver is not None:
            driver.join(timeout=2)
        loop.run_until_complete(runner.cleanup())
        loop.close()
