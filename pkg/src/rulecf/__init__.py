"""Counterfactual explanations for rule-based smart environments."""

from .cases import ConfusionContext, ExplanationCase, build_context, classify
from .candidates import (
    Candidate,
    Change,
    ChangeKind,
    Strategy,
    achieves_foil,
    apply_candidate,
    enumerate_candidates,
    find_appropriate,
    find_disturbing,
    select_strategy,
)
from .engine import (
    Event,
    FiringRecord,
    SystemState,
    eval_condition,
    initial_state,
    is_active,
    replay,
    simulate,
    step,
)
from .errors import RulecfError
from .model import (
    Controllability,
    Entity,
    Rule,
    Scenario,
    parse_scenario,
    serialize_scenario,
    validate_scenario,
)
from .pipeline import explain
from .render import Explanation, render_causal, render_counterfactual
from .scoring import (
    CriterionVector,
    RankingConfig,
    classify_controllability,
    filter_candidates,
    rank_candidates,
    score,
    topsis_closeness,
    topsis_rank,
)

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "Change",
    "ChangeKind",
    "ConfusionContext",
    "Controllability",
    "CriterionVector",
    "Entity",
    "Event",
    "Explanation",
    "ExplanationCase",
    "FiringRecord",
    "RankingConfig",
    "Rule",
    "RulecfError",
    "Scenario",
    "Strategy",
    "SystemState",
    "achieves_foil",
    "apply_candidate",
    "build_context",
    "classify",
    "classify_controllability",
    "enumerate_candidates",
    "eval_condition",
    "explain",
    "filter_candidates",
    "find_appropriate",
    "find_disturbing",
    "initial_state",
    "is_active",
    "parse_scenario",
    "rank_candidates",
    "render_causal",
    "render_counterfactual",
    "replay",
    "score",
    "select_strategy",
    "serialize_scenario",
    "simulate",
    "step",
    "topsis_closeness",
    "topsis_rank",
    "validate_scenario",
]
