"""Natural-language rendering of explanations.

Counterfactual sentences follow the conditional template "<device>
would <be / have been> <expected state> if <clauses>", with additive
clauses in the affirmative and subtractive clauses negated.  A causal
baseline sentence cites the true preconditions of the rule that caused
the fact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .candidates import Candidate, Change, ChangeKind
from .cases import ConfusionContext, ExplanationCase, classify
from .engine import FiringRecord
from .model import Condition, Operator, Scenario


@dataclass
class Explanation:
    device_of_interest: str
    foil: str
    kind: str  # "counterfactual" | "causal"
    text: str
    additive_changes: list[Change] = field(default_factory=list)
    subtractive_changes: list[Change] = field(default_factory=list)
    trace: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "device_of_interest": self.device_of_interest,
            "foil": self.foil,
            "kind": self.kind,
            "text": self.text,
            "additive_changes": [change_to_dict(c) for c in self.additive_changes],
            "subtractive_changes": [change_to_dict(c) for c in self.subtractive_changes],
            "trace": self.trace,
        }


def change_to_dict(c: Change) -> dict:
    return {
        "entity": c.entity,
        "kind": c.kind.value,
        "value": c.value,
        "target_value": c.target_value,
        "via_rule": c.via_rule,
    }


def _humanize(value: str) -> str:
    return value.replace("_", " ")


def _capitalize(text: str) -> str:
    return text[0].upper() + text[1:] if text else text


def _state_phrase(scenario: Scenario, entity_id: str, value: str) -> str:
    phrase = scenario.entity(entity_id).phrase(value, "state")
    return phrase if phrase else _humanize(value)


def _additive_clause(scenario: Scenario, change: Change, past_perfect: bool) -> str:
    entity = scenario.entity(change.entity)
    phrase = entity.phrase(change.value, "past")
    if phrase:
        return phrase
    verb = "had been" if past_perfect else "was"
    return f"{entity.noun_phrase()} {verb} {_humanize(change.value)}"


def _subtractive_clause(scenario: Scenario, change: Change, past_perfect: bool) -> str:
    entity = scenario.entity(change.entity)
    phrase = entity.phrase(change.value, "past_negated")
    if phrase:
        return phrase
    verb = "had not been" if past_perfect else "was not"
    return f"{entity.noun_phrase()} {verb} {_humanize(change.value)}"


def _declaration_order(scenario: Scenario, changes) -> list[Change]:
    order = {e.id: i for i, e in enumerate(scenario.entities)}
    return sorted(changes, key=lambda c: order[c.entity])


def render_counterfactual(
    cand: Candidate, ctx: ConfusionContext, scenario: Scenario
) -> Explanation:
    """Render the winning candidate as a counterfactual conditional."""
    case = classify(ctx)
    past_perfect = case is not ExplanationCase.E2
    device = scenario.entity(ctx.device_of_interest)
    mood = "would have been" if past_perfect else "would be"
    foil_phrase = _state_phrase(scenario, ctx.device_of_interest, ctx.expected_state)

    additive = _declaration_order(scenario, cand.additive_changes)
    subtractive = _declaration_order(scenario, cand.subtractive_changes)
    clauses = [_additive_clause(scenario, c, past_perfect) for c in additive]
    clauses += [_subtractive_clause(scenario, c, past_perfect) for c in subtractive]
    body = f"{_capitalize(device.noun_phrase())} {mood} {foil_phrase} if {' and '.join(clauses)}"
    text = body if body.endswith(".") else body + "."

    return Explanation(
        device_of_interest=ctx.device_of_interest,
        foil=ctx.expected_state,
        kind="counterfactual",
        text=text,
        additive_changes=additive,
        subtractive_changes=subtractive,
    )


def _condition_clause(scenario: Scenario, cond: Condition) -> str:
    entity = scenario.entity(cond.entity)
    if cond.operator is Operator.EQUALS:
        phrase = entity.phrase(cond.value, "present")
        if phrase:
            return phrase
        return f"{entity.noun_phrase()} is {_humanize(cond.value)}"
    return f"{entity.noun_phrase()} is not {_humanize(cond.value)}"


def render_causal(
    ctx: ConfusionContext,
    firing: FiringRecord | None,
    scenario: Scenario,
) -> Explanation:
    """Causal baseline: cite the fired rule's preconditions, or report
    that no rule was executed."""
    device = scenario.entity(ctx.device_of_interest)
    state_phrase = _state_phrase(scenario, ctx.device_of_interest, ctx.current_state)
    if firing is None:
        text = (
            f"{_capitalize(device.noun_phrase())} remains {state_phrase} "
            "because no rule was executed."
        )
        trace = {"cause": None}
    else:
        rule = scenario.rule(firing.rule_id)
        reasons = " and ".join(_condition_clause(scenario, c) for c in rule.preconditions)
        body = f"{_capitalize(device.noun_phrase())} is {state_phrase} because {reasons}"
        text = body if body.endswith(".") else body + "."
        trace = {"cause": firing.rule_id}
    return Explanation(
        device_of_interest=ctx.device_of_interest,
        foil=ctx.expected_state,
        kind="causal",
        text=text,
        trace=trace,
    )
