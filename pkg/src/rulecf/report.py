"""File reports for CLI runs: delimited data plus rendered figures.

``explain --report-dir`` writes the ranked candidate table as CSV and a
closeness bar chart; ``simulate --report-dir`` writes the trajectory as
newline-delimited JSON and a state timeline figure.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .engine import export_trajectory  # noqa: E402


def write_candidate_report(result: dict, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    alternatives = result.get("alternatives", [])
    csv_path = out_dir / "candidates.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "rank",
                "key",
                "strategy",
                "controllability",
                "sparsity",
                "temporality",
                "proximity",
                "abnormality",
                "closeness",
            ]
        )
        for i, alt in enumerate(alternatives, start=1):
            scores = alt.get("scores") or {}
            writer.writerow(
                [
                    i,
                    alt["key"],
                    alt["strategy"],
                    alt["controllability"],
                    scores.get("sparsity"),
                    scores.get("temporality"),
                    scores.get("proximity"),
                    scores.get("abnormality"),
                    f"{alt['closeness']:.6f}",
                ]
            )
    written.append(csv_path)

    if alternatives:
        fig, ax = plt.subplots(figsize=(8, 0.6 * len(alternatives) + 1.5))
        keys = [a["key"] for a in alternatives][::-1]
        closeness = [a["closeness"] for a in alternatives][::-1]
        ax.barh(keys, closeness, color="#4878a8")
        ax.set_xlabel("TOPSIS closeness")
        ax.set_xlim(0, 1.05)
        ax.set_title(f"Candidates for {result['device']} = {result['foil']}")
        fig.tight_layout()
        fig_path = out_dir / "closeness.png"
        fig.savefig(fig_path, dpi=120)
        plt.close(fig)
        written.append(fig_path)
    return written


def write_trajectory_report(scenario, trajectory, out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    ndjson_path = out_dir / "trajectory.ndjson"
    ndjson_path.write_text(export_trajectory(trajectory))
    written.append(ndjson_path)

    entities = [e.id for e in scenario.entities]
    steps = range(len(trajectory))
    fig, axes = plt.subplots(
        len(entities), 1, sharex=True, figsize=(8, 1.2 * len(entities) + 1)
    )
    if len(entities) == 1:
        axes = [axes]
    for ax, entity_id in zip(axes, entities):
        domain = scenario.entity(entity_id).domain
        levels = [domain.index(p.state.values[entity_id]) for p in trajectory]
        ax.step(steps, levels, where="post")
        ax.set_yticks(range(len(domain)))
        ax.set_yticklabels(domain, fontsize=8)
        ax.set_ylabel(entity_id, rotation=0, ha="right", fontsize=9)
    axes[-1].set_xlabel("step")
    fig.suptitle("Simulated state timeline")
    fig.tight_layout()
    fig_path = out_dir / "timeline.png"
    fig.savefig(fig_path, dpi=120)
    plt.close(fig)
    written.append(fig_path)
    return written
