"""Candidate change-set enumeration for achieving a foil.

Identifies disturbing and appropriate rules, selects the foil-achievement
strategy (activate / inactivate / mixed), and enumerates candidate change
sets through recursive direct and indirect activation and inactivation,
including reinforcing-rule closure.  Every emitted candidate is checked
against the inference engine before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Any

from . import engine, history_stats
from .cases import ConfusionContext
from .engine import Event, SystemState
from .errors import NoCandidatesError, UnachievableFoilError
from .model import (
    CONTROLLABILITY_ORDER,
    Condition,
    Controllability,
    Operator,
    Rule,
    Scenario,
)

MAX_CHANGES = 3
POOL_LIMIT = 5000


class ChangeKind(str, Enum):
    ADDITIVE = "additive"
    SUBTRACTIVE = "subtractive"


class Strategy(str, Enum):
    ACTIVATE = "F1"
    INACTIVATE = "F2"
    MIXED = "F3"


@dataclass(frozen=True)
class Change:
    """One proposed difference to the world.

    ``value`` is the state the entity should take (additive) or should
    not have had (subtractive); ``target_value`` is the concrete
    assignment applied when the change is simulated.
    """

    entity: str
    kind: ChangeKind
    value: str
    target_value: str
    via_rule: str | None = None

    def key(self) -> str:
        return f"{self.entity}:{self.kind.value}:{self.value}->{self.target_value}"


@dataclass
class Candidate:
    changes: frozenset[Change]
    strategy: Strategy
    target_appropriate_rule: str | None = None
    inactivated_rules: frozenset[str] = frozenset()
    scores: Any = None
    controllability: Controllability | None = None

    def key(self) -> str:
        return "|".join(sorted(c.key() for c in self.changes))

    def assignment_key(self) -> frozenset[tuple[str, str]]:
        return frozenset((c.entity, c.target_value) for c in self.changes)

    @property
    def additive_changes(self) -> list[Change]:
        return sorted(
            (c for c in self.changes if c.kind is ChangeKind.ADDITIVE),
            key=lambda c: c.entity,
        )

    @property
    def subtractive_changes(self) -> list[Change]:
        return sorted(
            (c for c in self.changes if c.kind is ChangeKind.SUBTRACTIVE),
            key=lambda c: c.entity,
        )


def find_disturbing(state: SystemState, rules, ctx: ConfusionContext) -> list[Rule]:
    """Active rules whose action on the device of interest contradicts the foil."""
    out = []
    for r in rules:
        action = r.action_on(ctx.device_of_interest)
        if action is None or action.value == ctx.expected_state:
            continue
        if engine.is_active(r, state):
            out.append(r)
    return sorted(out, key=lambda r: r.priority)


def find_appropriate(rules, ctx: ConfusionContext) -> list[Rule]:
    """All rules, active or not, whose actions set the device to the foil."""
    out = [
        r
        for r in rules
        if any(
            a.entity == ctx.device_of_interest and a.value == ctx.expected_state
            for a in r.actions
        )
    ]
    return sorted(out, key=lambda r: r.priority)


def select_strategy(
    disturbing: list[Rule],
    appropriate: list[Rule],
    state: SystemState,
    scenario: Scenario,
    ctx: ConfusionContext,
) -> Strategy:
    device = scenario.entity(ctx.device_of_interest)
    if not appropriate and device.controllability is not Controllability.ACTIONABLE:
        raise UnachievableFoilError(
            f"no rule sets {ctx.device_of_interest!r} to {ctx.expected_state!r} "
            "and the device is not directly actionable",
            device=ctx.device_of_interest,
            foil=ctx.expected_state,
        )
    if not disturbing:
        return Strategy.ACTIVATE
    active_appropriate = [r for r in appropriate if engine.is_active(r, state)]
    if active_appropriate:
        return Strategy.INACTIVATE
    return Strategy.MIXED


def _set_controllability(scenario: Scenario, changes) -> int:
    """Worst-case controllability rank of a change set (annotation only)."""
    worst = 0
    for c in changes:
        worst = max(worst, CONTROLLABILITY_ORDER[scenario.entity(c.entity).controllability])
    return worst


def _keep_minimal(scenario: Scenario, options: list[frozenset[Change]]) -> list[frozenset[Change]]:
    """Keep all options with minimal change count, ordered by controllability
    then a stable key."""
    if not options:
        return []
    best = min(len(o) for o in options)
    minimal = [o for o in options if len(o) == best]
    minimal.sort(
        key=lambda o: (
            _set_controllability(scenario, o),
            sorted(c.key() for c in o),
        )
    )
    out, seen = [], set()
    for o in minimal:
        if o not in seen:
            seen.add(o)
            out.append(o)
    return out


def _merge_sets(sets) -> frozenset[Change] | None:
    """Union change sets; None when two changes contradict on an entity."""
    targets: dict[str, str] = {}
    merged: set[Change] = set()
    for cs in sets:
        for c in cs:
            if c.entity in targets and targets[c.entity] != c.target_value:
                return None
            targets[c.entity] = c.target_value
            merged.add(c)
    # Drop duplicate changes differing only in provenance.
    dedup: dict[tuple[str, str, str, str], Change] = {}
    for c in sorted(merged, key=lambda c: (c.key(), c.via_rule or "")):
        dedup.setdefault((c.entity, c.kind.value, c.value, c.target_value), c)
    return frozenset(dedup.values())


def _tag_via(cs: frozenset[Change], rule_id: str) -> frozenset[Change]:
    return frozenset(
        c if c.via_rule else Change(c.entity, c.kind, c.value, c.target_value, rule_id)
        for c in cs
    )


def activation_changes(
    scenario: Scenario,
    rule: Rule,
    state: SystemState,
    history,
    visited: frozenset[str] = frozenset(),
    rules=None,
) -> list[frozenset[Change]]:
    """Minimal change sets that would activate a rule.

    Each false precondition is resolved directly (set the entity) or
    indirectly (recursively activate an inactive rule whose action
    satisfies it); per precondition only minimal-cost options survive.
    An already-active rule needs no changes.
    """
    rules = scenario.rules if rules is None else rules
    if engine.is_active(rule, state):
        return [frozenset()]
    visited = visited | {rule.id}

    per_precondition: list[list[frozenset[Change]]] = []
    for cond in rule.preconditions:
        if engine.eval_condition(state, cond):
            continue
        options: list[frozenset[Change]] = []
        domain = scenario.entity(cond.entity).domain
        if cond.operator is Operator.EQUALS:
            options.append(
                frozenset({Change(cond.entity, ChangeKind.ADDITIVE, cond.value, cond.value)})
            )
        else:
            # Currently equals the excluded value; any other value works.
            for w in domain:
                if w != cond.value:
                    options.append(
                        frozenset({Change(cond.entity, ChangeKind.ADDITIVE, w, w)})
                    )
        for r2 in rules:
            if r2.id in visited or engine.is_active(r2, state):
                continue
            action = r2.action_on(cond.entity)
            if action is None or not cond.holds(action.value):
                continue
            for cs in activation_changes(scenario, r2, state, history, visited, rules):
                if cs:
                    options.append(_tag_via(cs, r2.id))
        if not options:
            return []
        per_precondition.append(_keep_minimal(scenario, options))

    if not per_precondition:
        return [frozenset()]

    out: list[frozenset[Change]] = []
    seen: set[frozenset[Change]] = set()
    for combo in itertools.product(*per_precondition):
        merged = _merge_sets(combo)
        if merged is not None and merged not in seen:
            seen.add(merged)
            out.append(merged)
    return out


def _reinforcing_rules(scenario: Scenario, rule: Rule, cond: Condition, state, rules) -> list[Rule]:
    """Active rules whose action would re-establish a falsified precondition."""
    out = []
    for r in rules:
        if r.id == rule.id or not engine.is_active(r, state):
            continue
        action = r.action_on(cond.entity)
        if action is not None and cond.holds(action.value):
            out.append(r)
    return sorted(out, key=lambda r: r.priority)


def inactivation_changes(
    scenario: Scenario,
    rule: Rule,
    state: SystemState,
    history,
    rules=None,
    visited: frozenset[str] = frozenset(),
) -> list[frozenset[Change]]:
    """Change sets that falsify at least one precondition of an active rule.

    For every falsification the reinforcement closure is considered: if
    an active rule would immediately re-establish the condition, variants
    that additionally inactivate the reinforcing rule are emitted
    alongside the plain falsification.
    """
    rules = scenario.rules if rules is None else rules
    if not engine.is_active(rule, state):
        return [frozenset()]
    visited = visited | {rule.id}
    now = state.clock

    out: list[frozenset[Change]] = []
    seen: set[frozenset[Change]] = set()

    def emit(cs: frozenset[Change] | None):
        if cs and cs not in seen:
            seen.add(cs)
            out.append(cs)

    for cond in rule.preconditions:
        options: list[frozenset[Change]] = []
        if cond.operator is Operator.EQUALS:
            alt = history_stats.most_frequent_alternative(
                scenario, history, cond.entity, cond.value, now
            )
            options.append(
                frozenset({Change(cond.entity, ChangeKind.SUBTRACTIVE, cond.value, alt)})
            )
            satisfies = lambda v: v != cond.value  # noqa: E731
        else:
            options.append(
                frozenset({Change(cond.entity, ChangeKind.ADDITIVE, cond.value, cond.value)})
            )
            satisfies = lambda v: v == cond.value  # noqa: E731
        for r2 in rules:
            if r2.id in visited or engine.is_active(r2, state):
                continue
            action = r2.action_on(cond.entity)
            if action is None or not satisfies(action.value):
                continue
            for cs in activation_changes(scenario, r2, state, history, visited, rules):
                if cs:
                    options.append(_tag_via(cs, r2.id))
        options = _keep_minimal(scenario, options)

        reinforcing = _reinforcing_rules(scenario, rule, cond, state, rules)
        for option in options:
            emit(option)
            if not reinforcing:
                continue
            closure_options: list[list[frozenset[Change]]] = []
            diverged = False
            for r1 in reinforcing:
                if r1.id in visited:
                    diverged = True
                    break
                closure_options.append(
                    inactivation_changes(scenario, r1, state, history, rules, visited)
                )
            if diverged or any(not opts for opts in closure_options):
                continue
            for combo in itertools.product(*closure_options):
                emit(_merge_sets((option, *combo)))
    return out


def causal_timestamp(history, device: str) -> int | None:
    """Timestamp of the device's most recent state change, if any."""
    for entry in reversed(list(history)):
        if entry.entity == device:
            return entry.timestamp
    return None


def counterfactual_final_state(
    scenario: Scenario,
    history,
    device: str,
    cand: Candidate,
    cascade_cap: int = engine.DEFAULT_CASCADE_CAP,
) -> SystemState:
    """Final state after applying a candidate with subtractive changes.

    Subtractive changes prevent the establishing events: external events
    that set the removed state are dropped from the replayed history, a
    falsifying assignment is inserted just before the event that caused
    the fact, and additive changes are applied at the end.
    """
    removed = {(c.entity, c.value) for c in cand.subtractive_changes}
    cut = causal_timestamp(history, device)
    externals = [h for h in history if h.is_external]
    kept = [h for h in externals if (h.entity, h.new_value) not in removed]

    state = engine.initial_state(scenario)
    falsified = False

    def apply(event: Event, at: int):
        nonlocal state
        state = state.with_clock(max(state.clock, at))
        state = engine.step(scenario, state, event, cascade_cap=cascade_cap).state

    def apply_falsifiers(at: int):
        nonlocal falsified
        falsified = True
        for c in cand.subtractive_changes:
            if state.values[c.entity] == c.value:
                apply(Event(entity=c.entity, value=c.target_value), at)

    for h in kept:
        if cut is not None and not falsified and h.timestamp >= cut:
            apply_falsifiers(h.timestamp)
        apply(Event(entity=h.entity, value=h.new_value), h.timestamp)
    if not falsified:
        apply_falsifiers(state.clock)
    for c in cand.additive_changes:
        apply(Event(entity=c.entity, value=c.target_value), max(state.clock, scenario.clock))
    return state.with_clock(max(state.clock, scenario.clock))


def apply_candidate(
    scenario: Scenario,
    state: SystemState,
    history,
    ctx: ConfusionContext,
    cand: Candidate,
    cascade_cap: int = engine.DEFAULT_CASCADE_CAP,
) -> SystemState:
    """Canonical candidate application used for validity checks.

    Additive-only candidates are applied forward from the factual state;
    candidates with subtractive changes are evaluated by counterfactual
    replay of the history with establishing events prevented.
    """
    if cand.subtractive_changes:
        return counterfactual_final_state(
            scenario, history, ctx.device_of_interest, cand, cascade_cap
        )
    current = state
    for c in cand.additive_changes:
        result = engine.step(
            scenario, current, Event(entity=c.entity, value=c.target_value), cascade_cap=cascade_cap
        )
        current = result.state
    return current


def achieves_foil(
    scenario: Scenario,
    state: SystemState,
    history,
    ctx: ConfusionContext,
    cand: Candidate,
    cascade_cap: int = engine.DEFAULT_CASCADE_CAP,
) -> bool:
    try:
        final = apply_candidate(scenario, state, history, ctx, cand, cascade_cap)
    except Exception:
        return False
    return final.values[ctx.device_of_interest] == ctx.expected_state


def enumerate_candidates(
    scenario: Scenario,
    ctx: ConfusionContext,
    state: SystemState,
    history,
    rules=None,
    max_changes: int = MAX_CHANGES,
    cascade_cap: int = engine.DEFAULT_CASCADE_CAP,
) -> list[Candidate]:
    """Enumerate deduplicated, engine-validated candidates for the foil."""
    rules = scenario.rules if rules is None else rules
    disturbing = find_disturbing(state, rules, ctx)
    appropriate = find_appropriate(rules, ctx)
    select_strategy(disturbing, appropriate, state, scenario, ctx)

    pool: list[Candidate] = []

    def add(changes: frozenset[Change] | None, strategy: Strategy, target=None, inactivated=()):
        if not changes or len(changes) > max_changes:
            return
        if len(pool) >= POOL_LIMIT:
            return
        pool.append(
            Candidate(
                changes=changes,
                strategy=strategy,
                target_appropriate_rule=target,
                inactivated_rules=frozenset(inactivated),
            )
        )

    activation_sets: dict[str, list[frozenset[Change]]] = {}
    for ar in appropriate:
        activation_sets[ar.id] = [
            cs for cs in activation_changes(scenario, ar, state, history, rules=rules) if cs
        ]
        for cs in activation_sets[ar.id]:
            add(cs, Strategy.ACTIVATE, target=ar.id)

    inactivation_sets: dict[str, list[frozenset[Change]]] = {
        d.id: inactivation_changes(scenario, d, state, history, rules) for d in disturbing
    }
    if disturbing and all(inactivation_sets[d.id] for d in disturbing):
        for combo in itertools.product(*(inactivation_sets[d.id] for d in disturbing)):
            add(
                _merge_sets(combo),
                Strategy.INACTIVATE,
                inactivated=[d.id for d in disturbing],
            )

    # Mixed: one appropriate activation plus inactivation of a subset of
    # disturbing rules.  Disturbing rules that the activation does not
    # re-trigger may be left alone; validity filtering decides.
    for ar in appropriate:
        for cs in activation_sets.get(ar.id, []):
            for size in range(1, len(disturbing) + 1):
                for subset in itertools.combinations(disturbing, size):
                    if any(not inactivation_sets[d.id] for d in subset):
                        continue
                    for combo in itertools.product(
                        *(inactivation_sets[d.id] for d in subset)
                    ):
                        add(
                            _merge_sets((cs, *combo)),
                            Strategy.MIXED,
                            target=ar.id,
                            inactivated=[d.id for d in subset],
                        )

    # Deduplicate on the concrete change set; keep the structurally
    # simplest label for each.
    pool.sort(key=lambda c: (len(c.changes), c.key(), c.strategy.value))
    unique: dict[frozenset, Candidate] = {}
    for cand in pool:
        unique.setdefault(frozenset(cand.changes), cand)

    valid = [
        cand
        for cand in unique.values()
        if achieves_foil(scenario, state, history, ctx, cand, cascade_cap)
    ]
    valid.sort(key=lambda c: (len(c.changes), c.key()))
    if not valid and scenario.entity(ctx.device_of_interest).controllability is Controllability.ACTIONABLE:
        # Fall back to directly assigning the device when no rule-mediated
        # change set works but the device itself is in the user's hands.
        direct = Candidate(
            changes=frozenset(
                {
                    Change(
                        ctx.device_of_interest,
                        ChangeKind.ADDITIVE,
                        ctx.expected_state,
                        ctx.expected_state,
                    )
                }
            ),
            strategy=Strategy.ACTIVATE,
        )
        if achieves_foil(scenario, state, history, ctx, direct, cascade_cap):
            valid = [direct]
    if not valid:
        raise NoCandidatesError(
            f"no change set of size <= {max_changes} achieves "
            f"{ctx.device_of_interest!r} = {ctx.expected_state!r}",
            device=ctx.device_of_interest,
            foil=ctx.expected_state,
        )
    return valid
