import { describe, expect, it } from "vitest";

import { ApiError, PkgApi, statementTail } from "../src/api.js";
import { FIXTURES, OWNER, ServerDouble } from "./server-double.js";

function client(double: ServerDouble): PkgApi {
  return new PkgApi(
    { owner: OWNER.name, token: OWNER.token, baseUrl: "http://double.test" },
    double.fetch,
  );
}

describe("PkgApi", () => {
  it("sends the bearer token on every request", async () => {
    const double = new ServerDouble();
    double.seedTomCruise();
    await client(double).listStatements();
    expect(double.requests[0]?.auth).toBe(`Bearer ${OWNER.token}`);
  });

  it("submits utterances to the nl endpoint", async () => {
    const double = new ServerDouble();
    const result = await client(double).submitUtterance(
      "I dislike all movies with the actor Tom Cruise",
    );
    expect(double.requests[0]?.path).toBe(`/pkg/${OWNER.name}/nl`);
    expect(result.intent).toBe("ADD");
    expect(typeof result.result).toBe("string");
  });

  it("maps 422 responses to ApiError with the detail payload", async () => {
    const double = new ServerDouble();
    const err = await client(double)
      .submitUtterance("qwxz")
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(422);
    const detail = (err as ApiError).detail as { annotation: { intent: string } };
    expect(detail.annotation.intent).toBe("UNKNOWN");
  });

  it("maps 401 responses to ApiError", async () => {
    const double = new ServerDouble({ failWith: 401 });
    const err = await client(double)
      .listStatements()
      .catch((e: unknown) => e);
    expect((err as ApiError).status).toBe(401);
  });

  it("propagates network failures as plain errors", async () => {
    const double = new ServerDouble({ failWith: "network" });
    const err = await client(double)
      .listStatements()
      .catch((e: unknown) => e);
    expect(err).toBeInstanceOf(TypeError);
  });

  it("targets access updates at the statement tail", async () => {
    const double = new ServerDouble();
    double.seedTomCruise();
    const id = FIXTURES.statements[0]!.id;
    await client(double).setAccess(id, ["https://pkg.local/services/recommender"], []);
    expect(double.requests[0]?.path).toBe(
      `/pkg/${OWNER.name}/statements/${statementTail(id)}/access`,
    );
    expect(double.requests[0]?.method).toBe("PUT");
  });

  it("derives statement tails from full IRIs", () => {
    expect(statementTail("https://pkg.local/users/alice/stmt/abc-123")).toBe("abc-123");
    expect(statementTail("opaque")).toBe("opaque");
  });
});
