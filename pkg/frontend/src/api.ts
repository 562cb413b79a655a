// Typed client over fetch for the documented JSON endpoints. The fetch
// implementation is injectable so tests can run against a scripted server.

import type {
  ActionResultJson,
  GraphJson,
  PreferenceJson,
  StatementJson,
} from "./types.js";
import type { ClientSession } from "./session.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: unknown,
  ) {
    super(`API error ${status}`);
  }
}

export interface StatementInput {
  annotation: string;
  subject: { iri: string } | { text: string };
  predicate: { iri: string } | { text: string };
  object: { iri: string } | { text: string };
  preference?: { weight: number };
  access?: { read: string[]; write: string[] };
}

export class PkgApi {
  private fetchImpl: FetchLike;

  constructor(
    public session: ClientSession,
    fetchImpl?: FetchLike,
  ) {
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchImpl(`${this.session.baseUrl}${path}`, {
      method,
      headers: {
        Authorization: `Bearer ${this.session.token}`,
        ...(body !== undefined ? { "Content-Type": "application/json" } : {}),
      },
      ...(body !== undefined ? { body: JSON.stringify(body) } : {}),
    });
    if (!response.ok) {
      let detail: unknown = null;
      try {
        detail = (await response.json()) as { detail?: unknown };
        if (detail && typeof detail === "object" && "detail" in detail) {
          detail = (detail as { detail: unknown }).detail;
        }
      } catch {
        // non-JSON error body
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private pkgPath(rest: string): string {
    return `/pkg/${encodeURIComponent(this.session.owner)}${rest}`;
  }

  submitUtterance(statement: string): Promise<ActionResultJson> {
    return this.request("POST", this.pkgPath("/nl"), { statement });
  }

  addStatement(input: StatementInput): Promise<StatementJson> {
    return this.request("POST", this.pkgPath("/statements"), input);
  }

  listStatements(filter?: { s?: string; p?: string; o?: string }): Promise<StatementJson[]> {
    const params = new URLSearchParams();
    if (filter?.s) params.set("s", filter.s);
    if (filter?.p) params.set("p", filter.p);
    if (filter?.o) params.set("o", filter.o);
    const qs = params.toString();
    return this.request("GET", this.pkgPath(`/statements${qs ? `?${qs}` : ""}`));
  }

  deleteStatement(id: string): Promise<{ count: number }> {
    return this.request("DELETE", this.pkgPath(`/statements/${statementTail(id)}`));
  }

  setAccess(id: string, read: string[], write: string[]): Promise<StatementJson> {
    return this.request("PUT", this.pkgPath(`/statements/${statementTail(id)}/access`), {
      read,
      write,
    });
  }

  listPreferences(topic?: string): Promise<PreferenceJson[]> {
    const qs = topic ? `?topic=${encodeURIComponent(topic)}` : "";
    return this.request("GET", this.pkgPath(`/preferences${qs}`));
  }

  fetchGraph(): Promise<GraphJson> {
    return this.request("GET", this.pkgPath("/graph"));
  }

  exportTurtle(): Promise<string> {
    return this.fetchImpl(`${this.session.baseUrl}${this.pkgPath("/export")}`, {
      headers: { Authorization: `Bearer ${this.session.token}` },
    }).then(async (response) => {
      if (!response.ok) throw new ApiError(response.status, null);
      return response.text();
    });
  }
}

export function statementTail(id: string): string {
  const marker = "/stmt/";
  const at = id.lastIndexOf(marker);
  return at >= 0 ? id.slice(at + marker.length) : encodeURIComponent(id);
}
