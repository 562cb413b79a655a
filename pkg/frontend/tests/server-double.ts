// A scripted stand-in for the REST service, seeded with payloads captured
// from the real API so the wire schema in these tests is never hand-typed.
// Stateful where the flows need it: access-rights PUTs are remembered and
// visible to later GETs.

import fixtures from "./fixtures/api.json";
import type { FetchLike } from "../src/api.js";
import type { StatementJson } from "../src/types.js";

export const OWNER = fixtures.owner;
export const SERVICE = fixtures.service;
export const FIXTURES = fixtures;

function json(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface DoubleOptions {
  failWith?: number | "network"; // force every request to fail
}

export class ServerDouble {
  statements: StatementJson[] = [];
  requests: { method: string; path: string; auth: string | null; body: unknown }[] = [];
  private options: DoubleOptions;

  constructor(options: DoubleOptions = {}) {
    this.options = options;
  }

  seedTomCruise(): void {
    this.statements = JSON.parse(JSON.stringify(fixtures.statements)) as StatementJson[];
  }

  fetch: FetchLike = async (input, init) => {
    const url = new URL(input, "http://double.test");
    const method = (init?.method ?? "GET").toUpperCase();
    const headers = new Headers(init?.headers);
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    this.requests.push({
      method,
      path: url.pathname + url.search,
      auth: headers.get("authorization"),
      body,
    });

    if (this.options.failWith === "network") {
      throw new TypeError("fetch failed");
    }
    if (typeof this.options.failWith === "number") {
      return json({ detail: "forced failure" }, this.options.failWith);
    }
    if (headers.get("authorization") !== `Bearer ${OWNER.token}`) {
      return json({ detail: "unknown token" }, 401);
    }

    const path = url.pathname;
    if (method === "POST" && path === `/pkg/${OWNER.name}/nl`) {
      const statement = (body as { statement: string }).statement;
      if (statement === fixtures.nl_add.annotation!.raw) {
        this.seedTomCruise();
        return json(fixtures.nl_add);
      }
      if (statement === fixtures.nl_get.annotation!.raw) {
        return json({ ...fixtures.nl_get, result: this.statements });
      }
      return json({ detail: fixtures.nl_unknown.body.detail }, 422);
    }
    if (method === "GET" && path === `/pkg/${OWNER.name}/statements`) {
      return json(this.statements);
    }
    if (method === "PUT" && /\/statements\/[^/]+\/access$/.test(path)) {
      const tail = path.split("/statements/")[1]!.replace(/\/access$/, "");
      const statement = this.statements.find((s) => s.id.endsWith(`/stmt/${tail}`));
      if (!statement) return json({ detail: "unknown statement" }, 404);
      const { read, write } = body as { read: string[]; write: string[] };
      statement.access = { read: [...read].sort(), write: [...write].sort() };
      return json(statement);
    }
    if (method === "DELETE" && /\/statements\/[^/]+$/.test(path)) {
      const tail = path.split("/statements/")[1]!;
      const before = this.statements.length;
      this.statements = this.statements.filter((s) => !s.id.endsWith(`/stmt/${tail}`));
      if (this.statements.length === before) return json({ detail: "unknown statement" }, 404);
      return json({ count: 1 });
    }
    if (method === "GET" && path === `/pkg/${OWNER.name}/preferences`) {
      return json(fixtures.preferences);
    }
    if (method === "GET" && path === `/pkg/${OWNER.name}/graph`) {
      return json(fixtures.graph);
    }
    return json({ detail: `unhandled ${method} ${path}` }, 404);
  };
}
