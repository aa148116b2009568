/** Wire types for the rulecf HTTP service. */

export type Controllability =
  | "actionable"
  | "mutable-non-actionable"
  | "immutable";

export interface EntityTile {
  id: string;
  name: string;
  domain: string[];
  controllability: Controllability;
  value: string;
  last_changed: number | null;
}

export interface RuleRow {
  id: string;
  priority: number;
  active: boolean;
}

export interface StateResponse {
  state: { values: Record<string, string>; last_changed: Record<string, number>; clock: number };
  entities: EntityTile[];
  rules: RuleRow[];
}

export interface HistoryEntry {
  timestamp: number;
  entity: string;
  old_value: string;
  new_value: string;
  cause: string;
}

export interface Firing {
  rule: string;
  timestamp: number;
  entities_written: string[];
  preempted: string[];
}

export interface EventResponse {
  state: StateResponse["state"];
  firings: Firing[];
  new_history: HistoryEntry[];
}

export interface WireChange {
  entity: string;
  kind: "additive" | "subtractive";
  value: string;
  target_value: string;
  via_rule: string | null;
}

export interface RankedAlternative {
  changes: WireChange[];
  strategy: "F1" | "F2" | "F3";
  target_appropriate_rule: string | null;
  inactivated_rules: string[];
  controllability: Controllability | null;
  scores: {
    sparsity: number;
    temporality: number;
    proximity: number;
    abnormality: number;
  } | null;
  closeness: number;
  key: string;
}

export interface WireExplanation {
  device_of_interest: string;
  foil: string;
  kind: "counterfactual" | "causal";
  text: string;
  additive_changes: WireChange[];
  subtractive_changes: WireChange[];
  trace: Record<string, unknown>;
}

export interface ExplanationResponse {
  device: string;
  foil: string;
  config: Record<string, unknown>;
  case?: "E1" | "E2" | "E3";
  winner?: RankedAlternative;
  alternatives?: RankedAlternative[];
  explanations: WireExplanation[];
}

export interface ServiceError {
  error: string;
  message: string;
  details: Record<string, unknown>;
}
