"""End-to-end explanation pipeline.

Ties together case classification, candidate enumeration, scoring and
ranking, and rendering, producing an auditable response that embeds the
ranking configuration, the full candidate ordering, and a derivation
trace.
"""

from __future__ import annotations

from . import candidates as cand_mod
from . import engine
from .cases import build_context, classify
from .engine import FiringRecord, SystemState
from .errors import InvalidRequestError
from .model import Scenario
from .render import change_to_dict, render_causal, render_counterfactual
from .scoring import RankedCandidate, RankingConfig, rank_candidates

EXPLANATION_KINDS = ("counterfactual", "causal", "both")


def live_state(scenario: Scenario) -> tuple[SystemState, list]:
    """Authoritative session state: replay of the scenario's external events."""
    return engine.replay(scenario)


def _ranked_to_dict(r: RankedCandidate) -> dict:
    c = r.candidate
    return {
        "changes": [change_to_dict(ch) for ch in sorted(c.changes, key=lambda ch: ch.key())],
        "strategy": c.strategy.value,
        "target_appropriate_rule": c.target_appropriate_rule,
        "inactivated_rules": sorted(c.inactivated_rules),
        "controllability": c.controllability.value if c.controllability else None,
        "scores": c.scores.to_dict() if c.scores else None,
        "closeness": r.closeness,
        "key": c.key(),
    }


def causal_firing(history, device: str) -> FiringRecord | None:
    """The firing that produced the device's current state, if a rule did."""
    for entry in reversed(list(history)):
        if entry.entity == device:
            if entry.is_external:
                return None
            return FiringRecord(
                rule_id=entry.cause,
                timestamp=entry.timestamp,
                entities_written=(device,),
            )
    return None


def explain(
    scenario: Scenario,
    device: str,
    foil: str,
    kind: str = "counterfactual",
    config: RankingConfig = RankingConfig(),
    state: SystemState | None = None,
    history=None,
) -> dict:
    """Run the full pipeline and return a structured response."""
    if kind not in EXPLANATION_KINDS:
        raise InvalidRequestError(f"unknown explanation kind {kind!r}")
    if not scenario.has_entity(device):
        raise InvalidRequestError(f"undeclared device {device!r}")
    if foil not in scenario.entity(device).domain:
        raise InvalidRequestError(f"{foil!r} is not a state of {device!r}")

    if state is None or history is None:
        state, history = live_state(scenario)

    ctx = build_context(
        scenario, history, device, foil, state.values[device], state.clock
    )
    explanations = []
    result: dict = {
        "device": device,
        "foil": foil,
        "config": config.to_dict(),
    }

    if kind in ("causal", "both"):
        # The causal baseline does not require a confusing situation.
        firing = causal_firing(history, device)
        explanations.append(render_causal(ctx, firing, scenario).to_dict())

    if kind in ("counterfactual", "both"):
        case = classify(ctx)
        pool = cand_mod.enumerate_candidates(
            scenario, ctx, state, history, max_changes=config.sparsity_cap
        )
        ranked = rank_candidates(
            scenario, ctx, state, history, pool, config=config
        )
        winner = ranked[0]
        explanation = render_counterfactual(winner.candidate, ctx, scenario)
        explanation.trace = {
            "case": case.value,
            "strategy": winner.candidate.strategy.value,
            "target_appropriate_rule": winner.candidate.target_appropriate_rule,
            "inactivated_rules": sorted(winner.candidate.inactivated_rules),
            "candidates_enumerated": len(pool),
            "candidates_ranked": len(ranked),
        }
        explanations.append(explanation.to_dict())
        result.update(
            {
                "case": case.value,
                "winner": _ranked_to_dict(winner),
                "alternatives": [_ranked_to_dict(r) for r in ranked],
            }
        )

    result["explanations"] = explanations
    return result
