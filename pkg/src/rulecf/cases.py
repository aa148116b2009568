"""Explanation-case classification for a confusing situation.

Given the previous, current, and expected states of the device of
interest, exactly one of three cases applies:

* E1 - an undesired event occurred (expected == previous != current)
* E2 - an expected event did not occur (previous == current != expected)
* E3 - a different event occurred (all three states pairwise distinct)
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import NoExplanandumError
from .model import Scenario


class ExplanationCase(str, Enum):
    E1 = "E1"
    E2 = "E2"
    E3 = "E3"


@dataclass(frozen=True)
class ConfusionContext:
    device_of_interest: str
    previous_state: str
    current_state: str
    expected_state: str
    t0: int
    t1: int


def classify(ctx: ConfusionContext) -> ExplanationCase:
    if ctx.expected_state == ctx.current_state:
        raise NoExplanandumError(
            f"expected state equals current state ({ctx.current_state!r}); nothing to explain",
            device=ctx.device_of_interest,
        )
    if ctx.expected_state == ctx.previous_state:
        return ExplanationCase.E1
    if ctx.previous_state == ctx.current_state:
        return ExplanationCase.E2
    return ExplanationCase.E3


def build_context(
    scenario: Scenario,
    history,
    device: str,
    foil: str,
    current: str,
    now: int,
) -> ConfusionContext:
    """Resolve t0 and the previous state from history.

    t0 is the device's most recent state change before t1; when the
    device never changed, the previous state is the current one and t0
    is the scenario start.
    """
    previous = current
    t0 = scenario.start_time
    for entry in reversed(list(history)):
        if entry.entity == device and entry.timestamp <= now:
            previous = entry.old_value
            t0 = entry.timestamp
            break
    return ConfusionContext(
        device_of_interest=device,
        previous_state=previous,
        current_state=current,
        expected_state=foil,
        t0=t0,
        t1=now,
    )
