import json

import pytest
from click.testing import CliRunner

from rulecf.cli import main

from conftest import SCENARIOS

LAMP = str(SCENARIOS / "lamp.json")


@pytest.fixture()
def runner():
    return CliRunner()


def test_validate_ok(runner):
    result = runner.invoke(main, ["validate", LAMP])
    assert result.exit_code == 0
    assert "5 entities" in result.output


def test_validate_syntax_error(runner, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{broken")
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 2
    assert "syntax error" in result.output


def test_validate_semantic_error(runner, tmp_path):
    doc = json.loads((SCENARIOS / "lamp.json").read_text())
    doc["rules"][0]["priority"] = doc["rules"][1]["priority"]
    path = tmp_path / "dup.json"
    path.write_text(json.dumps(doc))
    result = runner.invoke(main, ["validate", str(path)])
    assert result.exit_code == 2
    assert "duplicate-priority" in result.output


def test_validate_missing_file(runner):
    result = runner.invoke(main, ["validate", "/nonexistent/path.json"])
    assert result.exit_code == 2


def test_explain_plain_text(runner):
    result = runner.invoke(main, ["explain", LAMP, "--device", "lamp", "--foil", "off"])
    assert result.exit_code == 0
    assert (
        result.output.strip()
        == "The lamp would have been off if the room had been empty."
    )


def test_explain_json(runner):
    result = runner.invoke(
        main,
        ["explain", LAMP, "--device", "lamp", "--foil", "off", "--kind", "both", "--json"],
    )
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert body["case"] == "E1"
    assert len(body["explanations"]) == 2


def test_explain_no_explanandum_exit_code(runner):
    result = runner.invoke(main, ["explain", LAMP, "--device", "lamp", "--foil", "on"])
    assert result.exit_code == 3
    assert "no-explanandum" in result.output


def test_explain_invalid_request_exit_code(runner):
    result = runner.invoke(
        main, ["explain", LAMP, "--device", "lamp", "--foil", "purple"]
    )
    assert result.exit_code == 2
    assert "invalid-request" in result.output


def test_explain_bad_weights_exit_code(runner):
    result = runner.invoke(
        main,
        ["explain", LAMP, "--device", "lamp", "--foil", "off", "--weights", "1,1,1,1"],
    )
    assert result.exit_code == 2
    assert "config error" in result.output


def test_explain_config_precedence(runner, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"weights": [0.7, 0.1, 0.1, 0.1]}))
    result = runner.invoke(
        main,
        [
            "explain", LAMP, "--device", "lamp", "--foil", "off", "--json",
            "--config", str(cfg), "--weights", "0.1,0.1,0.1,0.7",
        ],
    )
    assert result.exit_code == 0
    body = json.loads(result.output)
    assert body["config"]["weights"] == [0.1, 0.1, 0.1, 0.7]


def test_explain_report_dir(runner, tmp_path):
    report_dir = tmp_path / "report"
    result = runner.invoke(
        main,
        [
            "explain", LAMP, "--device", "lamp", "--foil", "off",
            "--report-dir", str(report_dir),
        ],
    )
    assert result.exit_code == 0
    assert (report_dir / "candidates.csv").is_file()
    assert (report_dir / "closeness.png").stat().st_size > 0
    header = (report_dir / "candidates.csv").read_text().splitlines()[0]
    assert "closeness" in header


def test_simulate_stdout(runner, tmp_path):
    events = tmp_path / "events.json"
    events.write_text(json.dumps([{"entity": "room", "value": "occupied", "advance_ms": 100}]))
    result = runner.invoke(main, ["simulate", LAMP, "--events", str(events)])
    assert result.exit_code == 0
    lines = result.output.strip().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["state"]["values"]["room"] == "occupied"


def test_simulate_ndjson_events_and_out(runner, tmp_path):
    events = tmp_path / "events.ndjson"
    events.write_text(
        '{"entity": "room", "value": "occupied"}\n{"advance_ms": 50}\n'
    )
    out = tmp_path / "trajectory.ndjson"
    result = runner.invoke(
        main, ["simulate", LAMP, "--events", str(events), "--out", str(out)]
    )
    assert result.exit_code == 0
    assert len(out.read_text().strip().splitlines()) == 3


def test_simulate_report_dir(runner, tmp_path):
    events = tmp_path / "events.json"
    events.write_text(json.dumps([{"entity": "room", "value": "occupied", "advance_ms": 100}]))
    report_dir = tmp_path / "report"
    result = runner.invoke(
        main,
        ["simulate", LAMP, "--events", str(events), "--report-dir", str(report_dir)],
    )
    assert result.exit_code == 0
    assert (report_dir / "trajectory.ndjson").is_file()
    assert (report_dir / "timeline.png").stat().st_size > 0


def test_simulate_bad_event(runner, tmp_path):
    events = tmp_path / "events.json"
    events.write_text(json.dumps([{"entity": "lamp", "value": "purple"}]))
    result = runner.invoke(main, ["simulate", LAMP, "--events", str(events)])
    assert result.exit_code == 2
    assert "invalid-event" in result.output
