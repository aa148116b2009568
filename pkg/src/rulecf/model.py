"""Scenario data model, JSON document format, parser and validator.

A scenario document is a single JSON object with top-level keys
``entities``, ``rules``, ``initial_state``, ``history`` and ``clock``.
Parsed scenarios are immutable and safe to share across sessions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Mapping

from .errors import ScenarioSyntaxError, ScenarioValidationError

EXTERNAL_CAUSE = "external"

# Phrase slots an entity may provide per state value.  All optional;
# the renderer falls back to mechanical forms.
PHRASE_KEYS = ("state", "present", "past", "past_negated")


class Controllability(str, Enum):
    """User's ability to enact a change on an entity."""

    ACTIONABLE = "actionable"
    MUTABLE = "mutable-non-actionable"
    IMMUTABLE = "immutable"


# Lower index = easier for the user to control.
CONTROLLABILITY_ORDER = {
    Controllability.ACTIONABLE: 0,
    Controllability.MUTABLE: 1,
    Controllability.IMMUTABLE: 2,
}


class Operator(str, Enum):
    EQUALS = "equals"
    NOT_EQUALS = "not-equals"


@dataclass(frozen=True)
class Entity:
    id: str
    domain: tuple[str, ...]
    controllability: Controllability
    name: str | None = None
    phrases: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def noun_phrase(self) -> str:
        return self.name if self.name else f"the {self.id}"

    def phrase(self, value: str, slot: str) -> str | None:
        entry = self.phrases.get(value)
        if entry:
            return entry.get(slot)
        return None


@dataclass(frozen=True)
class Condition:
    entity: str
    operator: Operator
    value: str

    def holds(self, value: str) -> bool:
        if self.operator is Operator.EQUALS:
            return value == self.value
        return value != self.value


@dataclass(frozen=True)
class ActionAssignment:
    entity: str
    value: str


@dataclass(frozen=True)
class Rule:
    id: str
    preconditions: tuple[Condition, ...]
    actions: tuple[ActionAssignment, ...]
    priority: int

    def action_on(self, entity: str) -> ActionAssignment | None:
        for a in self.actions:
            if a.entity == entity:
                return a
        return None


@dataclass(frozen=True)
class HistoryEntry:
    timestamp: int
    entity: str
    old_value: str
    new_value: str
    cause: str  # rule id or EXTERNAL_CAUSE

    @property
    def is_external(self) -> bool:
        return self.cause == EXTERNAL_CAUSE


@dataclass(frozen=True)
class Scenario:
    entities: tuple[Entity, ...]
    rules: tuple[Rule, ...]
    initial_state: Mapping[str, str]
    history: tuple[HistoryEntry, ...]
    clock: int

    def entity(self, entity_id: str) -> Entity:
        return self._entity_index[entity_id]

    def rule(self, rule_id: str) -> Rule:
        return self._rule_index[rule_id]

    def has_entity(self, entity_id: str) -> bool:
        return entity_id in self._entity_index

    @cached_property
    def _entity_index(self) -> dict[str, Entity]:
        return {e.id: e for e in self.entities}

    @cached_property
    def _rule_index(self) -> dict[str, Rule]:
        return {r.id: r for r in self.rules}

    @property
    def start_time(self) -> int:
        """Scenario start: first history timestamp, else the current clock."""
        return self.history[0].timestamp if self.history else self.clock

    def external_events(self) -> list[HistoryEntry]:
        return [h for h in self.history if h.is_external]


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def __str__(self) -> str:
        return f"[{self.code}] {self.message}"


def _require(obj, key, kind, where):
    if key not in obj:
        raise ScenarioSyntaxError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, kind):
        raise ScenarioSyntaxError(
            f"{where}: key {key!r} must be {kind.__name__}, got {type(val).__name__}"
        )
    return val


def _parse_entity(obj, i) -> Entity:
    where = f"entities[{i}]"
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError(f"{where}: expected object")
    eid = _require(obj, "id", str, where)
    domain = _require(obj, "domain", list, where)
    if not all(isinstance(v, str) for v in domain):
        raise ScenarioSyntaxError(f"{where}: domain values must be strings")
    raw_ctrl = _require(obj, "controllability", str, where)
    try:
        ctrl = Controllability(raw_ctrl)
    except ValueError:
        raise ScenarioSyntaxError(
            f"{where}: unknown controllability {raw_ctrl!r}"
        ) from None
    phrases = obj.get("phrases", {})
    if not isinstance(phrases, dict):
        raise ScenarioSyntaxError(f"{where}: phrases must be an object")
    clean_phrases: dict[str, dict[str, str]] = {}
    for state, entry in phrases.items():
        if not isinstance(entry, dict):
            raise ScenarioSyntaxError(f"{where}: phrases[{state!r}] must be an object")
        clean_phrases[state] = {
            k: v for k, v in entry.items() if k in PHRASE_KEYS and isinstance(v, str)
        }
    name = obj.get("name")
    if name is not None and not isinstance(name, str):
        raise ScenarioSyntaxError(f"{where}: name must be a string")
    return Entity(
        id=eid,
        domain=tuple(domain),
        controllability=ctrl,
        name=name,
        phrases=clean_phrases,
    )


def _parse_condition(obj, where) -> Condition:
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError(f"{where}: expected object")
    raw_op = _require(obj, "operator", str, where)
    try:
        op = Operator(raw_op)
    except ValueError:
        raise ScenarioSyntaxError(f"{where}: unknown operator {raw_op!r}") from None
    return Condition(
        entity=_require(obj, "entity", str, where),
        operator=op,
        value=_require(obj, "value", str, where),
    )


def _parse_rule(obj, i) -> Rule:
    where = f"rules[{i}]"
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError(f"{where}: expected object")
    rid = _require(obj, "id", str, where)
    priority = _require(obj, "priority", int, where)
    raw_pre = _require(obj, "preconditions", list, where)
    raw_act = _require(obj, "actions", list, where)
    preconditions = tuple(
        _parse_condition(c, f"{where}.preconditions[{j}]") for j, c in enumerate(raw_pre)
    )
    actions = []
    for j, a in enumerate(raw_act):
        aw = f"{where}.actions[{j}]"
        if not isinstance(a, dict):
            raise ScenarioSyntaxError(f"{aw}: expected object")
        actions.append(
            ActionAssignment(
                entity=_require(a, "entity", str, aw),
                value=_require(a, "value", str, aw),
            )
        )
    return Rule(id=rid, preconditions=preconditions, actions=tuple(actions), priority=priority)


def _parse_history_entry(obj, i) -> HistoryEntry:
    where = f"history[{i}]"
    if not isinstance(obj, dict):
        raise ScenarioSyntaxError(f"{where}: expected object")
    return HistoryEntry(
        timestamp=_require(obj, "timestamp", int, where),
        entity=_require(obj, "entity", str, where),
        old_value=_require(obj, "old_value", str, where),
        new_value=_require(obj, "new_value", str, where),
        cause=_require(obj, "cause", str, where),
    )


def parse_scenario(text: str) -> Scenario:
    """Parse and validate a scenario document.

    Raises ScenarioSyntaxError on malformed documents and
    ScenarioValidationError when the parsed scenario violates model
    invariants.  Parsing is pure and deterministic.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioSyntaxError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(doc, dict):
        raise ScenarioSyntaxError("top-level value must be an object")

    raw_entities = _require(doc, "entities", list, "document")
    raw_rules = _require(doc, "rules", list, "document")
    initial_state = _require(doc, "initial_state", dict, "document")
    raw_history = doc.get("history", [])
    if not isinstance(raw_history, list):
        raise ScenarioSyntaxError("document: history must be a list")
    clock = doc.get("clock", 0)
    if not isinstance(clock, int):
        raise ScenarioSyntaxError("document: clock must be an integer")

    scenario = Scenario(
        entities=tuple(_parse_entity(e, i) for i, e in enumerate(raw_entities)),
        rules=tuple(_parse_rule(r, i) for i, r in enumerate(raw_rules)),
        initial_state=dict(initial_state),
        history=tuple(_parse_history_entry(h, i) for i, h in enumerate(raw_history)),
        clock=clock,
    )
    violations = validate_scenario(scenario)
    if violations:
        raise ScenarioValidationError(violations)
    return scenario


def validate_scenario(s: Scenario) -> list[Violation]:
    """Return every invariant violation; empty list when the scenario is valid."""
    out: list[Violation] = []
    seen_entities: set[str] = set()
    for e in s.entities:
        if e.id in seen_entities:
            out.append(Violation("duplicate-id", f"duplicate entity id {e.id!r}"))
        seen_entities.add(e.id)
        if len(e.domain) < 2:
            out.append(
                Violation("domain-too-small", f"entity {e.id!r} needs at least 2 states")
            )
        if len(set(e.domain)) != len(e.domain):
            out.append(
                Violation("duplicate-domain-value", f"entity {e.id!r} has repeated states")
            )
        for state in e.phrases:
            if state not in e.domain:
                out.append(
                    Violation(
                        "phrase-out-of-domain",
                        f"entity {e.id!r} phrase key {state!r} not in domain",
                    )
                )

    def check_ref(entity_id: str, value: str | None, where: str):
        if entity_id not in seen_entities:
            out.append(
                Violation("undeclared-entity", f"{where} references undeclared entity {entity_id!r}")
            )
            return
        if value is not None and value not in s.entity(entity_id).domain:
            out.append(
                Violation(
                    "out-of-domain",
                    f"{where}: value {value!r} not in domain of {entity_id!r}",
                )
            )

    seen_rules: set[str] = set()
    seen_priorities: dict[int, str] = {}
    for r in s.rules:
        if r.id in seen_rules:
            out.append(Violation("duplicate-id", f"duplicate rule id {r.id!r}"))
        seen_rules.add(r.id)
        if r.priority < 1:
            out.append(
                Violation("bad-priority", f"rule {r.id!r} priority must be positive")
            )
        elif r.priority in seen_priorities:
            out.append(
                Violation(
                    "duplicate-priority",
                    f"rules {seen_priorities[r.priority]!r} and {r.id!r} share priority {r.priority}",
                )
            )
        else:
            seen_priorities[r.priority] = r.id
        if not r.preconditions:
            out.append(
                Violation("empty-preconditions", f"rule {r.id!r} has no preconditions")
            )
        if not r.actions:
            out.append(Violation("empty-actions", f"rule {r.id!r} has no actions"))
        targets: set[str] = set()
        for a in r.actions:
            if a.entity in targets:
                out.append(
                    Violation(
                        "duplicate-action-target",
                        f"rule {r.id!r} assigns entity {a.entity!r} twice",
                    )
                )
            targets.add(a.entity)
            check_ref(a.entity, a.value, f"rule {r.id!r} action")
        for c in r.preconditions:
            check_ref(c.entity, c.value, f"rule {r.id!r} precondition")

    for e in s.entities:
        if e.id not in s.initial_state:
            out.append(
                Violation("missing-initial-state", f"no initial state for entity {e.id!r}")
            )
    for entity_id, value in s.initial_state.items():
        check_ref(entity_id, value, "initial_state")

    prev_ts: int | None = None
    for i, h in enumerate(s.history):
        where = f"history[{i}]"
        check_ref(h.entity, None, where)
        if h.entity in seen_entities:
            dom = s.entity(h.entity).domain
            for v in (h.old_value, h.new_value):
                if v not in dom:
                    out.append(
                        Violation(
                            "out-of-domain", f"{where}: value {v!r} not in domain of {h.entity!r}"
                        )
                    )
        if h.new_value == h.old_value:
            out.append(Violation("no-op-history", f"{where}: old_value equals new_value"))
        if prev_ts is not None and h.timestamp < prev_ts:
            out.append(
                Violation("history-out-of-order", f"{where}: timestamps must be non-decreasing")
            )
        prev_ts = h.timestamp
        if h.cause != EXTERNAL_CAUSE and h.cause not in seen_rules:
            out.append(
                Violation("unknown-cause", f"{where}: cause {h.cause!r} is not a rule id")
            )
    return out


def scenario_to_dict(s: Scenario) -> dict:
    return {
        "entities": [
            {
                "id": e.id,
                "domain": list(e.domain),
                "controllability": e.controllability.value,
                **({"name": e.name} if e.name else {}),
                **({"phrases": {k: dict(v) for k, v in e.phrases.items()}} if e.phrases else {}),
            }
            for e in s.entities
        ],
        "rules": [
            {
                "id": r.id,
                "priority": r.priority,
                "preconditions": [
                    {"entity": c.entity, "operator": c.operator.value, "value": c.value}
                    for c in r.preconditions
                ],
                "actions": [{"entity": a.entity, "value": a.value} for a in r.actions],
            }
            for r in s.rules
        ],
        "initial_state": dict(s.initial_state),
        "history": [history_entry_to_dict(h) for h in s.history],
        "clock": s.clock,
    }


def history_entry_to_dict(h: HistoryEntry) -> dict:
    return {
        "timestamp": h.timestamp,
        "entity": h.entity,
        "old_value": h.old_value,
        "new_value": h.new_value,
        "cause": h.cause,
    }


def serialize_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2, sort_keys=False)
