"""Deterministic event-driven simulator for prioritized condition-action rules.

Firing is edge-triggered: a rule fires only when its preconditions flip
from unsatisfied to satisfied as a result of a state change.  Conflicts
between simultaneously activated rules writing the same entity are
resolved per entity and per cascade round by priority (smaller number
wins).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .errors import CascadeOverflowError, InvalidEventError
from .model import (
    EXTERNAL_CAUSE,
    ActionAssignment,
    Condition,
    HistoryEntry,
    Rule,
    Scenario,
    history_entry_to_dict,
)

DEFAULT_CASCADE_CAP = 32


@dataclass(frozen=True)
class SystemState:
    values: dict[str, str]
    last_changed: dict[str, int] = field(default_factory=dict)
    clock: int = 0

    def value(self, entity: str) -> str:
        return self.values[entity]

    def with_value(self, entity: str, value: str, timestamp: int) -> "SystemState":
        values = dict(self.values)
        values[entity] = value
        last = dict(self.last_changed)
        last[entity] = timestamp
        return SystemState(values=values, last_changed=last, clock=timestamp)

    def with_clock(self, clock: int) -> "SystemState":
        return replace(self, clock=clock)


@dataclass(frozen=True)
class FiringRecord:
    rule_id: str
    timestamp: int
    entities_written: tuple[str, ...]
    preempted: tuple[str, ...] = ()


@dataclass(frozen=True)
class Event:
    """External stimulus: an assignment, a clock advance, or both."""

    entity: str | None = None
    value: str | None = None
    advance_ms: int = 0

    def __post_init__(self):
        if self.entity is None and self.advance_ms == 0:
            raise InvalidEventError("event must assign an entity or advance the clock")
        if (self.entity is None) != (self.value is None):
            raise InvalidEventError("event assignment needs both entity and value")
        if self.advance_ms < 0:
            raise InvalidEventError("advance_ms must be non-negative")


@dataclass(frozen=True)
class StepResult:
    state: SystemState
    firings: tuple[FiringRecord, ...]
    new_history: tuple[HistoryEntry, ...]


def initial_state(scenario: Scenario) -> SystemState:
    return SystemState(values=dict(scenario.initial_state), last_changed={}, clock=scenario.clock)


def eval_condition(state: SystemState, c: Condition) -> bool:
    if c.entity not in state.values:
        raise InvalidEventError(f"condition references undeclared entity {c.entity!r}")
    return c.holds(state.values[c.entity])


def is_active(rule: Rule, state: SystemState) -> bool:
    return all(eval_condition(state, c) for c in rule.preconditions)


def active_rules(rules, state: SystemState) -> set[str]:
    return {r.id for r in rules if is_active(r, state)}


def step(
    scenario: Scenario,
    state: SystemState,
    event: Event,
    cascade_cap: int = DEFAULT_CASCADE_CAP,
) -> StepResult:
    """Apply one external event and cascade rule firings to fixpoint.

    Returns the new state, the firing records of the cascade, and the
    history entries produced (the external change first, then one entry
    per rule-caused change).
    """
    firings: list[FiringRecord] = []
    history: list[HistoryEntry] = []
    rules = scenario.rules

    now = state.clock + event.advance_ms
    before = state.with_clock(now)
    active_before = active_rules(rules, before)

    current = before
    if event.entity is not None:
        if not scenario.has_entity(event.entity):
            raise InvalidEventError(f"undeclared entity {event.entity!r}")
        if event.value not in scenario.entity(event.entity).domain:
            raise InvalidEventError(
                f"value {event.value!r} not in domain of {event.entity!r}"
            )
        old = current.values[event.entity]
        if event.value != old:
            current = current.with_value(event.entity, event.value, now)
            history.append(
                HistoryEntry(
                    timestamp=now,
                    entity=event.entity,
                    old_value=old,
                    new_value=event.value,
                    cause=EXTERNAL_CAUSE,
                )
            )

    visited: set[str] = set()  # rules whose activation edge was consumed this cascade
    depth = 0
    while True:
        active_now = active_rules(rules, current)
        newly = [
            r
            for r in rules
            if r.id in active_now and r.id not in active_before and r.id not in visited
        ]
        if not newly:
            break
        depth += 1
        if depth > cascade_cap:
            raise CascadeOverflowError(
                f"rule cascade exceeded depth cap {cascade_cap}", depth=depth
            )
        visited.update(r.id for r in newly)

        # Per-entity conflict resolution: smallest priority number wins.
        winners: dict[str, Rule] = {}
        contenders: dict[str, list[Rule]] = {}
        for r in newly:
            for a in r.actions:
                contenders.setdefault(a.entity, []).append(r)
                best = winners.get(a.entity)
                if best is None or r.priority < best.priority:
                    winners[a.entity] = r

        fired: dict[str, list[str]] = {}
        preempted: dict[str, set[str]] = {}
        next_state = current
        for entity, winner in sorted(winners.items()):
            action = winner.action_on(entity)
            losers = [r.id for r in contenders[entity] if r.id != winner.id]
            preempted.setdefault(winner.id, set()).update(losers)
            old = next_state.values[entity]
            if action.value != old:
                next_state = next_state.with_value(entity, action.value, now)
                history.append(
                    HistoryEntry(
                        timestamp=now,
                        entity=entity,
                        old_value=old,
                        new_value=action.value,
                        cause=winner.id,
                    )
                )
                fired.setdefault(winner.id, []).append(entity)
            else:
                fired.setdefault(winner.id, [])

        for rule_id in sorted(fired):
            firings.append(
                FiringRecord(
                    rule_id=rule_id,
                    timestamp=now,
                    entities_written=tuple(fired[rule_id]),
                    preempted=tuple(sorted(preempted.get(rule_id, ()))),
                )
            )
        active_before = active_now
        current = next_state

    return StepResult(state=current, firings=tuple(firings), new_history=tuple(history))


@dataclass(frozen=True)
class TrajectoryPoint:
    state: SystemState
    firings: tuple[FiringRecord, ...]


def simulate(
    scenario: Scenario,
    events,
    cascade_cap: int = DEFAULT_CASCADE_CAP,
    start: SystemState | None = None,
) -> tuple[list[TrajectoryPoint], list[HistoryEntry]]:
    """Fold ``step`` over an event list from the initial (or given) state.

    The trajectory has one point per event plus the starting point.
    """
    state = start if start is not None else initial_state(scenario)
    trajectory = [TrajectoryPoint(state=state, firings=())]
    history: list[HistoryEntry] = []
    for event in events:
        result = step(scenario, state, event, cascade_cap=cascade_cap)
        state = result.state
        trajectory.append(TrajectoryPoint(state=state, firings=result.firings))
        history.extend(result.new_history)
    return trajectory, history


def replay(
    scenario: Scenario, cascade_cap: int = DEFAULT_CASCADE_CAP
) -> tuple[SystemState, list[HistoryEntry]]:
    """Re-derive the live state by replaying the external events in history."""
    events = [
        Event(entity=h.entity, value=h.new_value, advance_ms=0)
        for h in scenario.external_events()
    ]
    state = initial_state(scenario)
    # External entries carry absolute timestamps; replay honors them.
    history: list[HistoryEntry] = []
    for h, event in zip(scenario.external_events(), events):
        state = state.with_clock(h.timestamp)
        result = step(scenario, state, event, cascade_cap=cascade_cap)
        state = result.state
        history.extend(result.new_history)
    if scenario.clock > state.clock:
        state = state.with_clock(scenario.clock)
    return state, history


def state_to_dict(state: SystemState) -> dict:
    return {
        "values": dict(sorted(state.values.items())),
        "last_changed": dict(sorted(state.last_changed.items())),
        "clock": state.clock,
    }


def firing_to_dict(f: FiringRecord) -> dict:
    return {
        "rule": f.rule_id,
        "timestamp": f.timestamp,
        "entities_written": list(f.entities_written),
        "preempted": list(f.preempted),
    }


def export_trajectory(trajectory) -> str:
    """Newline-delimited JSON, one record per trajectory point."""
    lines = []
    for i, point in enumerate(trajectory):
        record = {
            "index": i,
            "state": state_to_dict(point.state),
            "firings": [firing_to_dict(f) for f in point.firings],
        }
        lines.append(json.dumps(record, sort_keys=True))
    return "\n".join(lines) + "\n"


def parse_event(obj: dict) -> Event:
    if not isinstance(obj, dict):
        raise InvalidEventError("event must be an object")
    return Event(
        entity=obj.get("entity"),
        value=obj.get("value"),
        advance_ms=int(obj.get("advance_ms", 0)),
    )
