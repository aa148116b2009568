"""Ranking configuration loading.

Precedence: command-line flags > environment variables > config file >
defaults.  The config file is a JSON object with the keys ``weights``,
``sparsity_cap`` and ``temporality_sentinel``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .errors import RulecfError
from .scoring import RankingConfig

ENV_WEIGHTS = "RULECF_WEIGHTS"
ENV_SPARSITY_CAP = "RULECF_SPARSITY_CAP"
ENV_TEMPORALITY_SENTINEL = "RULECF_TEMPORALITY_SENTINEL"


def _parse_weights(raw) -> tuple[float, float, float, float]:
    if isinstance(raw, str):
        parts = [p for p in raw.replace(";", ",").split(",") if p.strip()]
    else:
        parts = list(raw)
    if len(parts) != 4:
        raise RulecfError(f"expected four weights, got {len(parts)}")
    return tuple(float(p) for p in parts)


def load_config(
    config_file: str | Path | None = None,
    env: dict | None = None,
    weights=None,
    sparsity_cap: int | None = None,
    temporality_sentinel: float | None = None,
) -> RankingConfig:
    env = os.environ if env is None else env
    values: dict = {}

    if config_file:
        try:
            doc = json.loads(Path(config_file).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise RulecfError(f"cannot read config file {config_file}: {exc}") from exc
        if "weights" in doc:
            values["weights"] = _parse_weights(doc["weights"])
        if "sparsity_cap" in doc:
            values["sparsity_cap"] = int(doc["sparsity_cap"])
        if "temporality_sentinel" in doc:
            values["temporality_sentinel"] = float(doc["temporality_sentinel"])

    if env.get(ENV_WEIGHTS):
        values["weights"] = _parse_weights(env[ENV_WEIGHTS])
    if env.get(ENV_SPARSITY_CAP):
        values["sparsity_cap"] = int(env[ENV_SPARSITY_CAP])
    if env.get(ENV_TEMPORALITY_SENTINEL):
        values["temporality_sentinel"] = float(env[ENV_TEMPORALITY_SENTINEL])

    if weights is not None:
        values["weights"] = _parse_weights(weights)
    if sparsity_cap is not None:
        values["sparsity_cap"] = sparsity_cap
    if temporality_sentinel is not None:
        values["temporality_sentinel"] = temporality_sentinel

    try:
        return RankingConfig(**values)
    except ValueError as exc:
        raise RulecfError(str(exc)) from exc
