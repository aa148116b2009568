/** Pure presentation helpers.
 *
 * Everything here maps service responses to display data or HTML
 * strings; there is no client-side rule evaluation and no hidden state,
 * which keeps these functions directly unit-testable.
 */

import type {
  Controllability,
  EntityTile,
  Firing,
  HistoryEntry,
  RankedAlternative,
  RuleRow,
  WireChange,
} from "./types.js";

export interface Badge {
  label: string;
  cssClass: string;
  interactive: boolean;
}

export function controllabilityBadge(c: Controllability): Badge {
  switch (c) {
    case "actionable":
      return { label: "you control this", cssClass: "badge-actionable", interactive: true };
    case "mutable-non-actionable":
      return { label: "set by rules", cssClass: "badge-mutable", interactive: false };
    case "immutable":
      return { label: "outside control", cssClass: "badge-immutable", interactive: false };
  }
}

/** Events to send for apply_suggestion: only actionable changes, the
 * subtractive ones first (undoing circumstances before adding new ones),
 * preserving the server's change order within each group. */
export function actionableEvents(
  alternative: RankedAlternative,
  entities: EntityTile[],
): { entity: string; value: string }[] {
  const actionable = new Set(
    entities.filter((e) => e.controllability === "actionable").map((e) => e.id),
  );
  const pick = (kind: WireChange["kind"]) =>
    alternative.changes
      .filter((c) => c.kind === kind && actionable.has(c.entity))
      .map((c) => ({ entity: c.entity, value: c.target_value }));
  return [...pick("subtractive"), ...pick("additive")];
}

export function isFullyActionable(
  alternative: RankedAlternative,
  entities: EntityTile[],
): boolean {
  const actionable = new Set(
    entities.filter((e) => e.controllability === "actionable").map((e) => e.id),
  );
  return alternative.changes.every((c) => actionable.has(c.entity));
}

export function describeChange(change: WireChange): string {
  const arrow = change.kind === "additive" ? "→" : "⇤";
  const via = change.via_rule ? ` (via ${change.via_rule})` : "";
  return `${change.entity} ${arrow} ${change.target_value}${via}`;
}

export function formatClock(ms: number): string {
  const total = Math.floor(ms / 1000);
  const h = Math.floor(total / 3600);
  const m = Math.floor((total % 3600) / 60);
  const s = total % 60;
  const pad = (n: number) => String(n).padStart(2, "0");
  return `${pad(h)}:${pad(m)}:${pad(s)}`;
}

export function formatCloseness(closeness: number): string {
  return closeness.toFixed(3);
}

const HTML_ESCAPES: Record<string, string> = {
  "&": "&amp;",
  "<": "&lt;",
  ">": "&gt;",
  '"': "&quot;",
};

export function escapeHtml(text: string): string {
  return text.replace(/[&<>"]/g, (ch) => HTML_ESCAPES[ch]);
}

export function tileHtml(tile: EntityTile): string {
  const badge = controllabilityBadge(tile.controllability);
  const options = tile.domain
    .map((v) => {
      const selected = v === tile.value ? " selected" : "";
      return `<option value="${escapeHtml(v)}"${selected}>${escapeHtml(v)}</option>`;
    })
    .join("");
  const control = badge.interactive
    ? `<select data-entity="${escapeHtml(tile.id)}" class="tile-select">${options}</select>`
    : `<span class="tile-value">${escapeHtml(tile.value)}</span>`;
  return (
    `<div class="tile" data-tile="${escapeHtml(tile.id)}" data-value="${escapeHtml(tile.value)}">` +
    `<h3>${escapeHtml(tile.name)}</h3>` +
    control +
    `<span class="badge ${badge.cssClass}">${badge.label}</span>` +
    `</div>`
  );
}

export function ruleRowHtml(rule: RuleRow): string {
  const stateClass = rule.active ? "rule-active" : "rule-inactive";
  const stateLabel = rule.active ? "active" : "inactive";
  return (
    `<li class="rule ${stateClass}" data-rule="${escapeHtml(rule.id)}">` +
    `<span class="rule-id">${escapeHtml(rule.id)}</span>` +
    `<span class="rule-priority">p${rule.priority}</span>` +
    `<span class="rule-state">${stateLabel}</span>` +
    `</li>`
  );
}

export function tickerLineHtml(entry: HistoryEntry): string {
  const cause = entry.cause === "external" ? "you / environment" : `rule ${entry.cause}`;
  return (
    `<li class="ticker-line">` +
    `<span class="ticker-time">${formatClock(entry.timestamp)}</span> ` +
    `${escapeHtml(entry.entity)}: ${escapeHtml(entry.old_value)} → ` +
    `${escapeHtml(entry.new_value)} <em>(${escapeHtml(cause)})</em>` +
    `</li>`
  );
}

export function firingSummary(firings: Firing[]): string {
  if (firings.length === 0) return "no rules fired";
  return firings
    .map((f) => {
      const wrote = f.entities_written.length
        ? `wrote ${f.entities_written.join(", ")}`
        : "no-op";
      const preempted = f.preempted.length ? `, preempted ${f.preempted.join(", ")}` : "";
      return `${f.rule} fired (${wrote}${preempted})`;
    })
    .join("; ");
}

export function alternativeHtml(
  alternative: RankedAlternative,
  index: number,
  entities: EntityTile[],
): string {
  const changes = alternative.changes.map(describeChange).join(", ");
  const applicable = isFullyActionable(alternative, entities);
  const button = applicable
    ? `<button class="apply" data-apply="${index}">apply</button>`
    : `<span class="not-applicable">informational</span>`;
  const scores = alternative.scores
    ? ` sparsity ${alternative.scores.sparsity}, proximity ${alternative.scores.proximity}`
    : "";
  return (
    `<li class="alternative" data-alternative="${index}">` +
    `<span class="alt-strategy">${alternative.strategy}</span> ` +
    `<span class="alt-changes">${escapeHtml(changes)}</span> ` +
    `<span class="alt-closeness">C=${formatCloseness(alternative.closeness)}${scores}</span> ` +
    button +
    `</li>`
  );
}
