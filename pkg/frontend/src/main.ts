// DOM wiring: login, the NL home screen, and the advanced screens
// (manual statement form, graph view, access rights). All rendering goes
// through the pure builders; this file only touches the DOM.

import { ApiError, PkgApi } from "./api.js";
import { buildNotUnderstood, buildOutcome } from "./outcome.js";
import {
  renderAccessRow,
  renderGraphSvg,
  renderOutcomePanel,
  renderStatementRow,
  escapeHtml,
} from "./render.js";
import { SessionStore } from "./session.js";
import type { ElementFieldInput } from "./forms.js";
import { parseServiceList, validateManualForm } from "./forms.js";
import { buildGraphViewModel } from "./viewmodel.js";
import { computeLayout } from "./layout.js";
import type { StatementJson } from "./types.js";

const sessions = new SessionStore();
let api: PkgApi | null = null;

function $(id: string): HTMLElement {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element;
}

function show(viewId: string): void {
  for (const section of document.querySelectorAll<HTMLElement>("[data-view]")) {
    section.hidden = section.id !== viewId;
  }
  for (const tab of document.querySelectorAll<HTMLElement>("nav [data-target]")) {
    tab.classList.toggle("active", tab.dataset.target === viewId);
  }
}

function banner(message: string | null): void {
  const element = $("error-banner");
  element.hidden = message === null;
  element.textContent = message ?? "";
}

function requireLogin(): void {
  api = null;
  sessions.clear();
  show("view-login");
}

function handleFailure(error: unknown): void {
  if (error instanceof ApiError && error.status === 401) {
    requireLogin();
    return;
  }
  banner(error instanceof Error ? error.message : String(error));
}

// ---- login ----

function initLogin(): void {
  $("login-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const owner = ($("login-owner") as HTMLInputElement).value.trim();
    const token = ($("login-token") as HTMLInputElement).value.trim();
    const baseUrl = ($("login-url") as HTMLInputElement).value.trim().replace(/\/$/, "");
    if (!owner || !token) return;
    const session = { owner, token, baseUrl };
    sessions.save(session);
    api = new PkgApi(session);
    show("view-home");
    void refreshStatements();
  });
}

// ---- home screen: NL form + outcome panel ----

function initHome(): void {
  const input = $("nl-input") as HTMLTextAreaElement;
  const submit = $("nl-submit") as HTMLButtonElement;
  input.addEventListener("input", () => {
    submit.disabled = input.value.trim() === "";
  });
  submit.disabled = true;

  $("nl-form").addEventListener("submit", (event) => {
    event.preventDefault();
    if (!api || input.value.trim() === "") return;
    const text = input.value;
    submit.disabled = true;
    api
      .submitUtterance(text)
      .then(async (result) => {
        banner(null);
        let added: StatementJson | null = null;
        if (result.intent === "ADD" && typeof result.result === "string") {
          const statements = await api!.listStatements();
          added = statements.find((statement) => statement.id === result.result) ?? null;
        }
        $("outcome").innerHTML = renderOutcomePanel(buildOutcome(result, added));
        input.value = "";
        void refreshStatements();
      })
      .catch((error) => {
        if (error instanceof ApiError && error.status === 422) {
          $("outcome").innerHTML = renderOutcomePanel(buildNotUnderstood(error.detail));
        } else {
          handleFailure(error); // network/401: banner or login; input preserved
        }
      })
      .finally(() => {
        submit.disabled = input.value.trim() === "";
      });
  });
}

// ---- statements table (home) ----

async function refreshStatements(): Promise<void> {
  if (!api) return;
  try {
    const statements = await api.listStatements();
    $("statement-rows").innerHTML = statements.map(renderStatementRow).join("");
    for (const button of document.querySelectorAll<HTMLButtonElement>(".delete-statement")) {
      button.addEventListener("click", () => {
        void api!
          .deleteStatement(button.dataset.id ?? "")
          .then(() => refreshStatements())
          .catch(handleFailure);
      });
    }
  } catch (error) {
    handleFailure(error);
  }
}

// ---- manual statement form ----

function readElementField(prefix: string): ElementFieldInput {
  const mode = ($(`${prefix}-mode`) as HTMLSelectElement).value === "iri" ? "iri" : "text";
  const value = ($(`${prefix}-value`) as HTMLInputElement).value;
  return { mode, value };
}

function initManualForm(): void {
  $("manual-form").addEventListener("submit", (event) => {
    event.preventDefault();
    if (!api) return;
    const outcome = validateManualForm({
      annotation: ($("manual-annotation") as HTMLInputElement).value,
      subject: readElementField("manual-subject"),
      predicate: readElementField("manual-predicate"),
      object: readElementField("manual-object"),
      preferenceWeight: ($("manual-weight") as HTMLInputElement).value,
    });
    const errors = $("manual-errors");
    if (!outcome.ok) {
      errors.innerHTML = outcome.errors
        .map((error) => `<li>${escapeHtml(error.field)}: ${escapeHtml(error.message)}</li>`)
        .join("");
      return;
    }
    errors.innerHTML = "";
    api
      .addStatement(outcome.input)
      .then(() => {
        banner(null);
        ($("manual-form") as HTMLFormElement).reset();
        void refreshStatements();
      })
      .catch(handleFailure);
  });
}

// ---- graph view ----

async function refreshGraph(): Promise<void> {
  if (!api) return;
  try {
    const payload = await api.fetchGraph();
    const graph = buildGraphViewModel(payload);
    const layout = computeLayout(graph, { seed: 42 });
    $("graph-canvas").innerHTML = renderGraphSvg(graph, layout);
    $("graph-stats").textContent =
      `${graph.counts.nodes} nodes, ${graph.counts.edges} edges ` +
      `(${graph.counts.byKind.statement} statements, ${graph.counts.byKind.concept} concepts, ` +
      `${graph.counts.byKind.preference} preferences)`;
    for (const nodeElement of document.querySelectorAll<SVGGElement>(".node")) {
      nodeElement.addEventListener("click", () => {
        const node = graph.byId.get(nodeElement.dataset.id ?? "");
        if (node) {
          $("graph-detail").textContent = `${node.kind}: ${node.label}\n${node.id}`;
        }
      });
    }
  } catch (error) {
    handleFailure(error);
  }
}

// ---- access rights panel ----

async function refreshAccess(): Promise<void> {
  if (!api) return;
  try {
    const statements = await api.listStatements();
    $("access-rows").innerHTML = statements.map(renderAccessRow).join("");
    for (const button of document.querySelectorAll<HTMLButtonElement>(".save-access")) {
      button.addEventListener("click", () => {
        const row = button.closest("tr");
        if (!row || !api) return;
        const read = parseServiceList(
          row.querySelector<HTMLInputElement>(".access-read")?.value ?? "",
        );
        const write = parseServiceList(
          row.querySelector<HTMLInputElement>(".access-write")?.value ?? "",
        );
        void api
          .setAccess(button.dataset.id ?? "", read, write)
          .then(() => refreshAccess())
          .catch(handleFailure);
      });
    }
  } catch (error) {
    handleFailure(error);
  }
}

// ---- boot ----

function initNav(): void {
  for (const tab of document.querySelectorAll<HTMLElement>("nav [data-target]")) {
    tab.addEventListener("click", () => {
      const target = tab.dataset.target ?? "view-home";
      show(target);
      if (target === "view-graph") void refreshGraph();
      if (target === "view-access") void refreshAccess();
      if (target === "view-home") void refreshStatements();
    });
  }
  $("logout").addEventListener("click", requireLogin);
}

export function boot(): void {
  initNav();
  initLogin();
  initHome();
  initManualForm();
  const session = sessions.load();
  if (session) {
    api = new PkgApi(session);
    show("view-home");
    void refreshStatements();
  } else {
    show("view-login");
  }
}

if (typeof document !== "undefined" && document.readyState !== "loading") {
  boot();
} else if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
