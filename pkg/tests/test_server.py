import asyncio
from datetime import date, datetime

from aiohttp.test_utils import TestClient, TestServer

from conftest import scenario

from repsense.goals import GoalState, issue_prompt, weekly_goal_check
from repsense.hub import Hub, run_session
from repsense.server import HubService, build_app
from repsense.store import MetricsStore


def hub_with_history(store_dir) -> Hub:
    store = MetricsStore(store_dir)
    result = run_session(
        scenario("clean_double"), seed=23, store=store,
        session_start=datetime(2026, 1, 5, 9, 0),
    )
    return result.hub


def hub_with_prompt() -> Hub:
    _, prompt = weekly_goal_check(3, [3] * 7, date(2026, 1, 11))
    goal = issue_prompt(GoalState(g=3), prompt, date(2026, 1, 11))
    return Hub(goal_state=goal, session_start=datetime(2026, 1, 12, 9, 0))


def serve_and(fn):
    async def go():
        async with TestClient(TestServer(fn.app)) as client:
            await fn(client)

    asyncio.run(go())


def with_client(hub):
    def decorator(fn):
        service = HubService(hub)
        app = build_app(service)

        async def runner():
            async with TestClient(TestServer(app)) as client:
                service.loop = asyncio.get_running_loop()
                await fn(client, service)

        asyncio.run(runner())

    return decorator


def test_snapshot_endpoint(store_dir):
    hub = hub_with_history(store_dir)

    @with_client(hub)
    async def _(client, service):
        resp = await client.get("/snapshot")
        assert resp.status == 200
        doc = await resp.json()
        assert doc["session"]["today"]["d"] == 1
        assert doc["weekly"]["total_d"] == 1
        assert doc["feedback"]["progress"] == "1/1"

    hub.store.close()


def test_report_endpoint_matches_store(store_dir):
    hub = hub_with_history(store_dir)

    @with_client(hub)
    async def _(client, service):
        resp = await client.get("/report", params={"week": "2026-01-05"})
        assert resp.status == 200
        doc = await resp.json()
        assert doc["total_d"] == 1
        bad = await client.get("/report", params={"week": "not-a-date"})
        assert bad.status == 400

    hub.store.close()


def test_ws_hello_and_replay(store_dir):
    hub = hub_with_history(store_dir)
    total_events = hub.bus.next_seq

    @with_client(hub)
    async def _(client, service):
        async with client.ws_connect("/ws") as ws:
            hello = await ws.receive_json()
            assert hello["type"] == "hello"
            assert hello["snapshot"]["session"]["stage"] == "seated"
            await ws.send_json({"type": "subscribe", "since_seq": 0})
            got = [await ws.receive_json() for _ in range(total_events)]
            assert [m["event"]["seq"] for m in got] == list(range(total_events))
            kinds = {m["event"]["kind"] for m in got}
            assert "stage_changed" in kinds and "repetition_logged" in kinds

    hub.store.close()


def test_ws_pause_command_acks_with_snapshot(store_dir):
    hub = hub_with_history(store_dir)

    @with_client(hub)
    async def _(client, service):
        async with client.ws_connect("/ws") as ws:
            await ws.receive_json()  # hello
            await ws.send_json({"type": "command", "command": "pause"})
            ack = await ws.receive_json()
            assert ack["type"] == "ack"
            assert ack["session"]["mode"] == "paused"
            await ws.send_json({"type": "command", "command": "resume"})
            ack = await ws.receive_json()
            assert ack["session"]["mode"] == "active"

    hub.store.close()


def test_ws_goal_accept_round_trip():
    hub = hub_with_prompt()

    @with_client(hub)
    async def _(client, service):
        async with client.ws_connect("/ws") as ws:
            hello = await ws.receive_json()
            assert hello["snapshot"]["session"]["pending_prompt"]["kind"] == "increase_offer"
            await ws.send_json({"type": "command", "command": "accept_goal"})
            ack = await ws.receive_json()
            assert ack["session"]["goal_g"] == 4
            assert ack["session"]["pending_prompt"] is None
            # a second resolution attempt must fail cleanly
            await ws.send_json({"type": "command", "command": "decline_goal"})
            err = await ws.receive_json()
            assert err["type"] == "error"


def test_ws_goal_decline_keeps_target():
    hub = hub_with_prompt()

    @with_client(hub)
    async def _(client, service):
        async with client.ws_connect("/ws") as ws:
            await ws.receive_json()
            await ws.send_json({"type": "command", "command": "decline_goal"})
            ack = await ws.receive_json()
            assert ack["session"]["goal_g"] == 3


def test_ws_rejects_unknown_traffic():
    hub = Hub()

    @with_client(hub)
    async def _(client, service):
        async with client.ws_connect("/ws") as ws:
            await ws.receive_json()
            await ws.send_json({"type": "command", "command": "explode"})
            assert (await ws.receive_json())["type"] == "error"
            await ws.send_str("not json")
            assert (await ws.receive_json())["type"] == "error"
            await ws.send_json({"type": "mystery"})
            assert (await ws.receive_json())["type"] == "error"
