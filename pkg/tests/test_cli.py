import json
import socket
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import SCENARIO_DIR

from repsense.cli import main


def run_cli(*args, capsys):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_simulate_clean_double_prints_one_double(store_dir, capsys):
    code, out, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "clean_double.scn"),
        "--fast", "--store", str(store_dir), "--seed", "7",
        capsys=capsys,
    )
    assert code == 0
    assert "1 double, 0 singles" in out


def test_simulate_empty_scenario(store_dir, capsys):
    code, out, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "empty.scn"),
        "--store", str(store_dir),
        capsys=capsys,
    )
    assert code == 0
    assert "0 doubles, 0 singles" in out


def test_replay_reproduces_aggregates(store_dir, capsys):
    code, _, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "mixed_day.scn"),
        "--store", str(store_dir), "--seed", "3",
        capsys=capsys,
    )
    assert code == 0
    code, out, _ = run_cli("replay", "--log", str(store_dir / "events.ldjson"),
                           capsys=capsys)
    assert code == 0
    assert out.encode() == (store_dir / "daily.json").read_bytes()


def test_report_renders_table(store_dir, capsys):
    run_cli("simulate", "--scenario", str(SCENARIO_DIR / "mixed_day.scn"),
            "--store", str(store_dir), "--seed", "3", capsys=capsys)
    code, out, _ = run_cli("report", "--store", str(store_dir), "--goal", "1",
                           capsys=capsys)
    assert code == 0
    assert "adherence: 1/7 days met goal" in out
    assert "2026-01-05" in out


def test_report_json_mode(store_dir, capsys):
    run_cli("simulate", "--scenario", str(SCENARIO_DIR / "clean_double.scn"),
            "--store", str(store_dir), capsys=capsys)
    code, out, _ = run_cli("report", "--store", str(store_dir), "--goal", "1",
                           "--json", capsys=capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["total_d"] == 1
    assert doc["adherence_met"] == 1


def test_multi_day_simulation(store_dir, capsys):
    code, out, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "clean_double.scn"),
        "--store", str(store_dir), "--days", "7",
        capsys=capsys,
    )
    assert code == 0
    assert "increase_offer" in out
    assert (store_dir / "goal.json").exists()


def test_usage_error_exits_one():
    proc = subprocess.run(
        [sys.executable, "-m", "repsense.cli", "simulate"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert "scenario" in proc.stderr


def test_unknown_subcommand_exits_one():
    proc = subprocess.run(
        [sys.executable, "-m", "repsense.cli", "explode"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1


def test_missing_scenario_exits_two(store_dir, capsys):
    code, _, err = run_cli("simulate", "--scenario", "nope.scn", capsys=capsys)
    assert code == 2
    assert "nope.scn" in err


def test_serve_on_occupied_port_exits_two(store_dir, capsys):
    placeholder = socket.socket()
    placeholder.bind(("127.0.0.1", 0))
    port = placeholder.getsockname()[1]
    code, _, err = run_cli(
        "serve", "--store", str(store_dir), "--port", str(port),
        capsys=capsys,
    )
    placeholder.close()
    assert code == 2
    assert "address" in err.lower() or "port" in err.lower() or str(port) in err


def test_faults_file_applied(store_dir, tmp_path, capsys):
    faults = tmp_path / "faults.toml"
    faults.write_text("loss_prob = 1.0\n")
    code, out, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "clean_double.scn"),
        "--store", str(store_dir), "--faults", str(faults),
        capsys=capsys,
    )
    assert code == 0
    assert "0 doubles, 0 singles" in out  # everything was lost in transit


def test_pause_flag_suppresses_logging(store_dir, capsys):
    code, out, _ = run_cli(
        "simulate", "--scenario", str(SCENARIO_DIR / "clean_double.scn"),
        "--store", str(store_dir), "--pause", "4:26",
        capsys=capsys,
    )
    assert code == 0
    assert "0 doubles, 0 singles" in out
