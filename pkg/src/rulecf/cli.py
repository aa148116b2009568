"""Command-line interface.

Exit codes: 0 success, 2 validation or parse error, 3 the request has no
explanandum or no achievable candidates.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import engine, pipeline, report
from .config import load_config
from .errors import (
    NoCandidatesError,
    NoExplanandumError,
    RulecfError,
    ScenarioSyntaxError,
    ScenarioValidationError,
    UnachievableFoilError,
)
from .model import parse_scenario, validate_scenario

EXIT_VALIDATION = 2
EXIT_NO_EXPLANATION = 3


def _load_scenario(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        return parse_scenario(text)
    except ScenarioSyntaxError as exc:
        loc = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        click.echo(f"syntax error{loc}: {exc.message}", err=True)
        sys.exit(EXIT_VALIDATION)
    except ScenarioValidationError as exc:
        for v in exc.violations:
            click.echo(str(v), err=True)
        sys.exit(EXIT_VALIDATION)


config_options = [
    click.option("--config", "config_file", type=click.Path(), default=None,
                 help="JSON config file with weights, sparsity_cap, temporality_sentinel."),
    click.option("--weights", default=None,
                 help="Four comma-separated criterion weights summing to 1."),
    click.option("--sparsity-cap", type=int, default=None),
    click.option("--temporality-sentinel", type=float, default=None),
]


def with_config_options(fn):
    for option in reversed(config_options):
        fn = option(fn)
    return fn


def _ranking_config(config_file, weights, sparsity_cap, temporality_sentinel):
    try:
        return load_config(
            config_file=config_file,
            weights=weights,
            sparsity_cap=sparsity_cap,
            temporality_sentinel=temporality_sentinel,
        )
    except RulecfError as exc:
        click.echo(f"config error: {exc.message}", err=True)
        sys.exit(EXIT_VALIDATION)


@click.group()
def main():
    """Counterfactual explanations for rule-based smart environments."""


@main.command()
@click.argument("scenario_file", type=click.Path())
def validate(scenario_file):
    """Parse and validate a scenario document."""
    scenario = _load_scenario(scenario_file)
    violations = validate_scenario(scenario)
    if violations:
        for v in violations:
            click.echo(str(v), err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo(
        f"ok: {len(scenario.entities)} entities, {len(scenario.rules)} rules, "
        f"{len(scenario.history)} history entries"
    )


@main.command()
@click.argument("scenario_file", type=click.Path())
@click.option("--events", "events_file", type=click.Path(), required=True,
              help="JSON list or NDJSON of events ({entity, value} or {advance_ms}).")
@click.option("--out", type=click.Path(), default=None,
              help="Write the trajectory as newline-delimited JSON.")
@click.option("--report-dir", type=click.Path(), default=None,
              help="Write trajectory data and a timeline figure to this directory.")
def simulate(scenario_file, events_file, out, report_dir):
    """Run the inference engine over an event script."""
    scenario = _load_scenario(scenario_file)
    try:
        raw = Path(events_file).read_text()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    try:
        if raw.lstrip().startswith("["):
            event_dicts = json.loads(raw)
        else:
            event_dicts = [json.loads(line) for line in raw.splitlines() if line.strip()]
        events = [engine.parse_event(e) for e in event_dicts]
        trajectory, _ = engine.simulate(scenario, events)
    except RulecfError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(EXIT_VALIDATION)
    text = engine.export_trajectory(trajectory)
    if out:
        Path(out).write_text(text)
    else:
        click.echo(text, nl=False)
    if report_dir:
        for path in report.write_trajectory_report(scenario, trajectory, report_dir):
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.argument("scenario_file", type=click.Path())
@click.option("--device", required=True)
@click.option("--foil", required=True)
@click.option("--kind", type=click.Choice(["counterfactual", "causal", "both"]),
              default="counterfactual")
@click.option("--json", "as_json", is_flag=True, help="Print the full structured response.")
@click.option("--report-dir", type=click.Path(), default=None,
              help="Write the candidate table and closeness figure to this directory.")
@with_config_options
def explain(scenario_file, device, foil, kind, as_json, report_dir,
            config_file, weights, sparsity_cap, temporality_sentinel):
    """Generate an explanation for a confusing situation."""
    scenario = _load_scenario(scenario_file)
    config = _ranking_config(config_file, weights, sparsity_cap, temporality_sentinel)
    try:
        result = pipeline.explain(scenario, device, foil, kind=kind, config=config)
    except (NoExplanandumError, NoCandidatesError, UnachievableFoilError) as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(EXIT_NO_EXPLANATION)
    except RulecfError as exc:
        click.echo(f"error [{exc.code}]: {exc.message}", err=True)
        sys.exit(EXIT_VALIDATION)
    if as_json:
        click.echo(json.dumps(result, indent=2))
    else:
        for explanation in result["explanations"]:
            click.echo(explanation["text"])
    if report_dir:
        for path in report.write_candidate_report(result, report_dir):
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--data-dir", type=click.Path(), default="./rulecf-data")
@with_config_options
def serve(port, host, data_dir, config_file, weights, sparsity_cap, temporality_sentinel):
    """Start the HTTP service."""
    import uvicorn

    from .service import create_app

    config = _ranking_config(config_file, weights, sparsity_cap, temporality_sentinel)
    app = create_app(data_dir, config=config)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
