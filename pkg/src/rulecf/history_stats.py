"""Occupancy statistics over an entity's state timeline.

The timeline starts at the scenario start with the initial value and is
advanced by history entries; statistics are measured as time shares, so
they are robust to event density.
"""

from __future__ import annotations

from .model import Scenario


def value_timeline(
    scenario: Scenario, history, entity: str, now: int
) -> list[tuple[str, int, int]]:
    """Return (value, start, end) segments for the entity up to ``now``."""
    entries = [h for h in history if h.entity == entity and h.timestamp <= now]
    start = min((h.timestamp for h in history if h.timestamp <= now), default=now)
    value = scenario.initial_state[entity]
    segments: list[tuple[str, int, int]] = []
    t = start
    for h in entries:
        if h.timestamp > t:
            segments.append((value, t, h.timestamp))
            t = h.timestamp
        value = h.new_value
    if now > t or not segments:
        segments.append((value, t, max(now, t)))
    return segments


def occupancy_frequency(
    scenario: Scenario, history, entity: str, value: str, now: int
) -> float | None:
    """Share of time the entity held ``value``; None when the span is empty."""
    segments = value_timeline(scenario, history, entity, now)
    span = sum(end - start for _, start, end in segments)
    if span <= 0:
        return None
    held = sum(end - start for v, start, end in segments if v == value)
    return held / span


def elapsed_since_held(
    scenario: Scenario, history, entity: str, value: str, now: int
) -> int | None:
    """Milliseconds since the entity last held ``value``; 0 when it holds now,
    None when the value never occurred in the timeline."""
    segments = value_timeline(scenario, history, entity, now)
    last_end: int | None = None
    for v, _start, end in segments:
        if v == value:
            last_end = end
    if last_end is None:
        return None
    if segments and segments[-1][0] == value:
        return 0
    return max(0, now - last_end)


def most_frequent_alternative(
    scenario: Scenario, history, entity: str, avoid: str, now: int
) -> str:
    """Pick the replacement value when falsifying ``entity == avoid``.

    The domain successor of ``avoid`` is used unless another value was
    historically more frequent (ties resolved in domain order).
    """
    domain = scenario.entity(entity).domain
    idx = domain.index(avoid) if avoid in domain else -1
    successor = domain[(idx + 1) % len(domain)]
    best_value, best_freq = None, 0.0
    for v in domain:
        if v == avoid:
            continue
        freq = occupancy_frequency(scenario, history, entity, v, now) or 0.0
        if freq > best_freq:
            best_value, best_freq = v, freq
    if best_value is not None and best_value != successor and best_freq > 0.0:
        succ_freq = occupancy_frequency(scenario, history, entity, successor, now) or 0.0
        if best_freq > succ_freq:
            return best_value
    return successor
