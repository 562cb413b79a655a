import { describe, expect, it } from "vitest";

import { isValidIri, parseServiceList, validateManualForm } from "../src/forms.js";

const base = {
  annotation: "Bob knows Carol",
  subject: { mode: "iri" as const, value: "http://example.org/people/bob" },
  predicate: { mode: "text" as const, value: "know" },
  object: { mode: "text" as const, value: "Carol" },
  preferenceWeight: "",
};

describe("manual statement form", () => {
  it("accepts a well-formed statement", () => {
    const outcome = validateManualForm(base);
    expect(outcome.ok).toBe(true);
    if (outcome.ok) {
      expect(outcome.input.subject).toEqual({ iri: "http://example.org/people/bob" });
      expect(outcome.input.predicate).toEqual({ text: "know" });
      expect(outcome.input.preference).toBeUndefined();
    }
  });

  it("flags a malformed IRI before submission", () => {
    const outcome = validateManualForm({
      ...base,
      subject: { mode: "iri", value: "not an iri" },
    });
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) {
      expect(outcome.errors).toEqual([
        { field: "subject", message: "not a valid absolute IRI" },
      ]);
    }
  });

  it("requires every element and the annotation", () => {
    const outcome = validateManualForm({
      annotation: " ",
      subject: { mode: "text", value: "" },
      predicate: { mode: "text", value: "know" },
      object: { mode: "text", value: "" },
      preferenceWeight: "",
    });
    expect(outcome.ok).toBe(false);
    if (!outcome.ok) {
      expect(outcome.errors.map((e) => e.field)).toEqual(["annotation", "subject", "object"]);
    }
  });

  it("bounds the preference weight", () => {
    const ok = validateManualForm({ ...base, preferenceWeight: "-1" });
    expect(ok.ok && ok.input.preference).toEqual({ weight: -1 });
    const bad = validateManualForm({ ...base, preferenceWeight: "2" });
    expect(bad.ok).toBe(false);
  });

  it("validates IRIs like the server does", () => {
    expect(isValidIri("https://pkg.local/users/alice")).toBe(true);
    expect(isValidIri("urn:uuid:1234")).toBe(true);
    expect(isValidIri("no-scheme")).toBe(false);
    expect(isValidIri("http://has space.example/")).toBe(false);
    expect(isValidIri('http://bad"quote.example/')).toBe(false);
  });

  it("parses comma- or space-separated service lists", () => {
    expect(parseServiceList("a, b  c,\n d, a")).toEqual(["a", "b", "c", "d"]);
    expect(parseServiceList("  ")).toEqual([]);
  });
});
