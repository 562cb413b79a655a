// HTML/SVG string builders. Kept pure (string in, string out) so the
// panels are testable without a DOM; main.ts owns actual DOM insertion.

import type { PanelView } from "./outcome.js";
import type { StatementJson } from "./types.js";
import { elementText, isConcept } from "./types.js";
import type { GraphViewModel } from "./viewmodel.js";
import type { LayoutPoint } from "./layout.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;")
    .replaceAll("'", "&#39;");
}

export function renderOutcomePanel(view: PanelView): string {
  if (view.kind === "not-understood") {
    const annotation = view.annotation
      ? `<pre class="annotation">${escapeHtml(JSON.stringify(view.annotation, null, 2))}</pre>`
      : "";
    return `
      <div class="outcome outcome-unknown" data-intent="UNKNOWN">
        <span class="badge badge-unknown">not understood</span>
        <p>${escapeHtml(view.message)}</p>
        ${annotation}
      </div>`;
  }
  const chips = view.chips
    .map(
      (chip) =>
        `<span class="chip chip-${chip.resolved ? "resolved" : "concept"}" title="${chip.role}">` +
        `${escapeHtml(chip.text)}</span>`,
    )
    .join(" ");
  const polarity =
    view.polarity === null
      ? ""
      : `<span class="badge badge-${view.polarity}">${
          view.polarity === "positive" ? "+1 preference" : "-1 preference"
        }</span>`;
  const rows = view.statements
    .map((statement) => `<li>${escapeHtml(statement.annotation)}</li>`)
    .join("");
  return `
    <div class="outcome" data-intent="${view.intent}">
      <span class="badge badge-intent">${view.intent}</span>
      ${polarity}
      <p class="headline">${escapeHtml(view.headline)}</p>
      <div class="chips">${chips}</div>
      ${rows ? `<ul class="results">${rows}</ul>` : ""}
      <details><summary>executed query</summary>
        <pre class="query">${escapeHtml(view.query)}</pre>
      </details>
    </div>`;
}

export function renderStatementRow(statement: StatementJson): string {
  const cell = (element: StatementJson["subject"]) =>
    `<td class="${isConcept(element) ? "concept" : "resolved"}">${escapeHtml(
      elementText(element),
    )}</td>`;
  const weight = statement.preference ? statement.preference.weight.toFixed(1) : "";
  return (
    `<tr data-id="${escapeHtml(statement.id)}">` +
    `<td>${escapeHtml(statement.annotation)}</td>` +
    cell(statement.subject) +
    cell(statement.predicate) +
    cell(statement.object) +
    `<td>${weight}</td>` +
    `<td>${statement.access.read.length}r/${statement.access.write.length}w</td>` +
    `<td><button class="delete-statement" data-id="${escapeHtml(statement.id)}">delete</button></td>` +
    `</tr>`
  );
}

const NODE_RADIUS: Record<string, number> = {
  statement: 14,
  owner: 16,
  preference: 9,
  concept: 11,
  entity: 11,
};

export function renderGraphSvg(
  graph: GraphViewModel,
  layout: LayoutPoint[],
  width = 800,
  height = 600,
): string {
  const at = new Map(layout.map((point) => [point.id, point]));
  const edges = graph.edges
    .map((edge) => {
      const a = at.get(edge.source);
      const b = at.get(edge.target);
      if (!a || !b) return "";
      const mx = (a.x + b.x) / 2;
      const my = (a.y + b.y) / 2;
      return (
        `<line x1="${a.x.toFixed(1)}" y1="${a.y.toFixed(1)}" x2="${b.x.toFixed(1)}" y2="${b.y.toFixed(1)}" class="edge" />` +
        `<text x="${mx.toFixed(1)}" y="${my.toFixed(1)}" class="edge-label">${escapeHtml(edge.label)}</text>`
      );
    })
    .join("");
  const nodes = graph.nodes
    .map((node) => {
      const point = at.get(node.id);
      if (!point) return "";
      const radius = NODE_RADIUS[node.kind] ?? 10;
      const label = node.label.length > 28 ? `${node.label.slice(0, 27)}…` : node.label;
      return (
        `<g class="node node-${node.kind}" data-id="${escapeHtml(node.id)}">` +
        `<circle cx="${point.x.toFixed(1)}" cy="${point.y.toFixed(1)}" r="${radius}" />` +
        `<text x="${point.x.toFixed(1)}" y="${(point.y + radius + 12).toFixed(1)}">${escapeHtml(label)}</text>` +
        `</g>`
      );
    })
    .join("");
  return (
    `<svg viewBox="0 0 ${width} ${height}" xmlns="http://www.w3.org/2000/svg" role="img">` +
    `<g class="edges">${edges}</g><g class="nodes">${nodes}</g></svg>`
  );
}

export function renderAccessRow(statement: StatementJson): string {
  return (
    `<tr data-id="${escapeHtml(statement.id)}">` +
    `<td>${escapeHtml(statement.annotation)}</td>` +
    `<td><input class="access-read" value="${escapeHtml(statement.access.read.join(", "))}" /></td>` +
    `<td><input class="access-write" value="${escapeHtml(statement.access.write.join(", "))}" /></td>` +
    `<td><button class="save-access" data-id="${escapeHtml(statement.id)}">save</button></td>` +
    `</tr>`
  );
}
