"""Controllability filtering, criterion scoring, and TOPSIS ranking.

Sparsity, temporality and proximity are cost criteria; abnormality is
transformed into a benefit (rare removed states and normal desired
states score higher).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import engine, history_stats
from .candidates import Candidate, Change, ChangeKind, causal_timestamp
from .cases import ConfusionContext
from .engine import Event, SystemState
from .errors import NoCandidatesError
from .model import CONTROLLABILITY_ORDER, Controllability, Scenario

DEFAULT_WEIGHTS = (0.25, 0.25, 0.25, 0.25)
DEFAULT_SPARSITY_CAP = 3
DEFAULT_TEMPORALITY_SENTINEL = 10**12  # ms; "never occurred"

COST_CRITERIA = ("sparsity", "temporality", "proximity")
BENEFIT_CRITERIA = ("abnormality",)
CRITERIA = COST_CRITERIA + BENEFIT_CRITERIA


@dataclass(frozen=True)
class CriterionVector:
    sparsity: int
    temporality: float
    proximity: float
    abnormality: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.sparsity, self.temporality, self.proximity, self.abnormality],
            dtype=float,
        )

    def to_dict(self) -> dict:
        return {
            "sparsity": self.sparsity,
            "temporality": self.temporality,
            "proximity": self.proximity,
            "abnormality": self.abnormality,
        }


@dataclass(frozen=True)
class RankingConfig:
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS
    sparsity_cap: int = DEFAULT_SPARSITY_CAP
    temporality_sentinel: float = DEFAULT_TEMPORALITY_SENTINEL

    def __post_init__(self):
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ValueError("weights must be four non-negative numbers")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")
        if self.sparsity_cap < 1:
            raise ValueError("sparsity_cap must be positive")

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights),
            "sparsity_cap": self.sparsity_cap,
            "temporality_sentinel": self.temporality_sentinel,
        }


def classify_controllability(
    scenario: Scenario,
    change: Change,
    state: SystemState,
    history,
    rules=None,
    visited: frozenset[str] = frozenset(),
) -> Controllability:
    """Resolve the controllability class of one change.

    Actionable and immutable annotations decide directly; mutable
    non-actionable entities are resolved by recursing into the
    preconditions of inactive rules able to produce the change, taking
    the best class any enabling path achieves.
    """
    from .candidates import activation_changes

    rules = scenario.rules if rules is None else rules
    annotation = scenario.entity(change.entity).controllability
    if annotation is not Controllability.MUTABLE:
        return annotation

    best = Controllability.IMMUTABLE
    for r in rules:
        if r.id in visited or engine.is_active(r, state):
            continue
        action = r.action_on(change.entity)
        if action is None or action.value != change.target_value:
            continue
        for cs in activation_changes(
            scenario, r, state, history, visited | {r.id}, rules
        ):
            if not cs:
                continue
            worst = Controllability.ACTIONABLE
            for sub in cs:
                cls = classify_controllability(
                    scenario, sub, state, history, rules, visited | {r.id}
                )
                if CONTROLLABILITY_ORDER[cls] > CONTROLLABILITY_ORDER[worst]:
                    worst = cls
            if CONTROLLABILITY_ORDER[worst] < CONTROLLABILITY_ORDER[best]:
                best = worst
    return best


def candidate_controllability(
    scenario: Scenario, cand: Candidate, state: SystemState, history, rules=None
) -> Controllability:
    worst = Controllability.ACTIONABLE
    for c in cand.changes:
        cls = classify_controllability(scenario, c, state, history, rules)
        if CONTROLLABILITY_ORDER[cls] > CONTROLLABILITY_ORDER[worst]:
            worst = cls
    return worst


def filter_candidates(
    scenario: Scenario,
    cands: list[Candidate],
    state: SystemState,
    history,
    rules=None,
    config: RankingConfig = RankingConfig(),
) -> list[Candidate]:
    """Apply the sparsity cap and controllability preferences.

    Candidates with an immutable change are dropped when an
    immutable-free candidate exists; fully-actionable candidates, when
    present, displace everything else.
    """
    if not cands:
        raise NoCandidatesError("no candidates to filter")
    capped = [c for c in cands if len(c.changes) <= config.sparsity_cap]
    if not capped:
        raise NoCandidatesError(
            f"all candidates exceed the sparsity cap of {config.sparsity_cap}"
        )
    for cand in capped:
        if cand.controllability is None:
            cand.controllability = candidate_controllability(
                scenario, cand, state, history, rules
            )
    survivors = [c for c in capped if c.controllability is not Controllability.IMMUTABLE]
    if not survivors:
        survivors = capped
    fully_actionable = [
        c for c in survivors if c.controllability is Controllability.ACTIONABLE
    ]
    if fully_actionable:
        survivors = fully_actionable
    return survivors


def _proximity_base(
    scenario: Scenario, ctx: ConfusionContext, state: SystemState, history, cand: Candidate
) -> SystemState:
    """Additive changes simulate forward from the current state; subtractive
    changes start from the state prior to the prevented event."""
    if not cand.subtractive_changes:
        return state
    cut = causal_timestamp(history, ctx.device_of_interest)
    if cut is None:
        return state
    base = engine.initial_state(scenario)
    for h in history:
        if not h.is_external or h.timestamp >= cut:
            continue
        base = base.with_clock(h.timestamp)
        base = engine.step(scenario, base, Event(entity=h.entity, value=h.new_value)).state
    return base


def score(
    scenario: Scenario,
    cand: Candidate,
    ctx: ConfusionContext,
    state: SystemState,
    history,
    config: RankingConfig = RankingConfig(),
) -> CriterionVector:
    now = state.clock
    sparsity = len(cand.changes)

    temporality = 0.0
    for c in cand.changes:
        elapsed = history_stats.elapsed_since_held(
            scenario, history, c.entity, c.target_value, now
        )
        value = float(elapsed) if elapsed is not None else float(config.temporality_sentinel)
        temporality = max(temporality, value)

    base = _proximity_base(scenario, ctx, state, history, cand)
    events = [
        Event(entity=c.entity, value=c.target_value)
        for c in cand.subtractive_changes + cand.additive_changes
    ]
    extra_changes = firings = preemptions = 0
    sim_state = base
    for event in events:
        result = engine.step(scenario, sim_state, event)
        sim_state = result.state
        extra_changes += sum(1 for h in result.new_history if not h.is_external)
        firings += len(result.firings)
        preemptions += sum(len(f.preempted) for f in result.firings)
    proximity = float(extra_changes + firings + preemptions)

    benefits = []
    for c in cand.changes:
        if c.kind is ChangeKind.SUBTRACTIVE:
            freq = history_stats.occupancy_frequency(scenario, history, c.entity, c.value, now)
            benefits.append(0.5 if freq is None else 1.0 - freq)
        else:
            freq = history_stats.occupancy_frequency(scenario, history, c.entity, c.value, now)
            benefits.append(0.5 if freq is None else freq)
    abnormality = sum(benefits) / len(benefits) if benefits else 0.5

    return CriterionVector(
        sparsity=sparsity,
        temporality=temporality,
        proximity=proximity,
        abnormality=abnormality,
    )


def topsis_closeness(
    matrix: np.ndarray,
    weights=DEFAULT_WEIGHTS,
    benefit=(False, False, False, True),
) -> np.ndarray:
    """Closeness coefficients for a decision matrix (rows = alternatives).

    Columns of all zeros are dropped; each remaining column is divided
    by its Euclidean norm, weighted, and compared against the ideal and
    anti-ideal points.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] == 0:
        raise ValueError("matrix must be a non-empty 2-D array")
    weights = np.asarray(weights, dtype=float)
    benefit = np.asarray(benefit, dtype=bool)

    keep = ~np.all(m == 0, axis=0)
    m = m[:, keep]
    weights = weights[keep]
    benefit = benefit[keep]
    if m.shape[1] == 0:
        return np.ones(matrix.shape[0] if hasattr(matrix, "shape") else len(matrix))

    norms = np.linalg.norm(m, axis=0)
    weighted = m / norms * weights
    ideal = np.where(benefit, weighted.max(axis=0), weighted.min(axis=0))
    anti = np.where(benefit, weighted.min(axis=0), weighted.max(axis=0))
    d_pos = np.linalg.norm(weighted - ideal, axis=1)
    d_neg = np.linalg.norm(weighted - anti, axis=1)
    denom = d_pos + d_neg
    closeness = np.where(denom == 0, 1.0, np.divide(d_neg, np.where(denom == 0, 1.0, denom)))
    return closeness


@dataclass
class RankedCandidate:
    candidate: Candidate
    closeness: float


def topsis_rank(
    cands: list[Candidate], config: RankingConfig = RankingConfig()
) -> list[RankedCandidate]:
    """Order scored candidates by closeness to the ideal point.

    Ties break by sparsity ascending, then candidate key.
    """
    if not cands:
        raise NoCandidatesError("no candidates to rank")
    matrix = np.vstack([c.scores.as_array() for c in cands])
    closeness = topsis_closeness(matrix, config.weights)
    ranked = [RankedCandidate(c, float(cl)) for c, cl in zip(cands, closeness)]
    ranked.sort(
        key=lambda r: (-r.closeness, len(r.candidate.changes), r.candidate.key())
    )
    return ranked


def rank_candidates(
    scenario: Scenario,
    ctx: ConfusionContext,
    state: SystemState,
    history,
    cands: list[Candidate],
    rules=None,
    config: RankingConfig = RankingConfig(),
) -> list[RankedCandidate]:
    """Filter, score, and rank; the head is the minimal change.

    Among the TOPSIS ordering, the winner is additionally required to be
    of minimal cardinality: the highest-ranked candidate with the fewest
    changes is promoted to the head.
    """
    survivors = filter_candidates(scenario, cands, state, history, rules, config)
    for cand in survivors:
        cand.scores = score(scenario, cand, ctx, state, history, config)
    ranked = topsis_rank(survivors, config)
    min_size = min(len(r.candidate.changes) for r in ranked)
    winner_idx = next(
        i for i, r in enumerate(ranked) if len(r.candidate.changes) == min_size
    )
    if winner_idx != 0:
        ranked.insert(0, ranked.pop(winner_idx))
    return ranked
