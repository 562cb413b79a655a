// Outcome-panel view model for a submitted utterance: what the API
// understood (intent, SPO with resolved-vs-concept marking, preference
// polarity) and the query it executed.

import type { ActionResultJson, AnnotationJson, StatementJson } from "./types.js";
import { elementText, isConcept } from "./types.js";

export interface SpoChip {
  role: "subject" | "predicate" | "object";
  text: string;
  resolved: boolean; // true when linked to an IRI, false for concept fallback
}

export interface OutcomeView {
  kind: "result";
  intent: "ADD" | "GET" | "DELETE";
  headline: string;
  chips: SpoChip[];
  polarity: "positive" | "negative" | null;
  query: string;
  statements: StatementJson[]; // GET results, or the single added statement
  count: number | null; // DELETE count
}

export interface NotUnderstoodView {
  kind: "not-understood";
  message: string;
  annotation: AnnotationJson | null;
}

export type PanelView = OutcomeView | NotUnderstoodView;

function chipsFromStatement(statement: StatementJson): SpoChip[] {
  return (["subject", "predicate", "object"] as const).map((role) => ({
    role,
    text: elementText(statement[role]),
    resolved: !isConcept(statement[role]),
  }));
}

function chipsFromAnnotation(annotation: AnnotationJson): SpoChip[] {
  const chips: SpoChip[] = [];
  for (const role of ["subject", "predicate", "object"] as const) {
    const text = annotation[role];
    if (text !== null) chips.push({ role, text, resolved: false });
  }
  return chips;
}

export function buildOutcome(
  result: ActionResultJson,
  added: StatementJson | null = null,
): OutcomeView {
  const polarityOf = (value: number | null | undefined): OutcomeView["polarity"] =>
    value == null ? null : value > 0 ? "positive" : "negative";

  if (result.intent === "ADD") {
    const chips = added
      ? chipsFromStatement(added)
      : result.annotation
        ? chipsFromAnnotation(result.annotation)
        : [];
    const polarity = added?.preference
      ? polarityOf(added.preference.weight)
      : polarityOf(result.annotation?.polarity);
    return {
      kind: "result",
      intent: "ADD",
      headline: "Statement added",
      chips,
      polarity,
      query: result.query,
      statements: added ? [added] : [],
      count: null,
    };
  }
  if (result.intent === "GET") {
    const statements = Array.isArray(result.result) ? result.result : [];
    return {
      kind: "result",
      intent: "GET",
      headline: `${statements.length} statement(s) found`,
      chips: result.annotation ? chipsFromAnnotation(result.annotation) : [],
      polarity: null,
      query: result.query,
      statements,
      count: null,
    };
  }
  const count = typeof result.result === "number" ? result.result : 0;
  return {
    kind: "result",
    intent: "DELETE",
    headline: `${count} statement(s) removed`,
    chips: result.annotation ? chipsFromAnnotation(result.annotation) : [],
    polarity: null,
    query: result.query,
    statements: [],
    count,
  };
}

export function buildNotUnderstood(detail: unknown): NotUnderstoodView {
  let annotation: AnnotationJson | null = null;
  let message = "The statement was not understood.";
  if (detail && typeof detail === "object") {
    const d = detail as { message?: string; annotation?: AnnotationJson };
    if (d.message) message = d.message;
    if (d.annotation) annotation = d.annotation;
  }
  return { kind: "not-understood", message, annotation };
}
