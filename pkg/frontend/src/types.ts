// Wire types for the pkgraph REST API. The client renders exclusively from
// these JSON shapes; it never parses RDF.

export type ElementJson =
  | { iri: string }
  | { concept: { id: string; text: string } };

export interface PreferenceJson {
  id: string;
  holder: string;
  topic: ElementJson;
  weight: number;
  derivedFrom: string;
}

export interface ProvenanceJson {
  createdBy: string;
  createdOn: string;
  derivedFrom?: string;
}

export interface StatementJson {
  id: string;
  annotation: string;
  subject: ElementJson;
  predicate: ElementJson;
  object: ElementJson;
  preference?: PreferenceJson;
  provenance: ProvenanceJson;
  access: { read: string[]; write: string[] };
}

export interface AnnotationJson {
  raw: string;
  intent: string;
  subject: string | null;
  predicate: string | null;
  object: string | null;
  polarity: number | null;
  annotator: string;
  failureReason: string | null;
}

export interface ActionResultJson {
  intent: "ADD" | "GET" | "DELETE";
  query: string;
  result: string | StatementJson[] | number;
  annotation?: AnnotationJson;
}

export type NodeKind = "statement" | "concept" | "entity" | "preference" | "owner";

export interface GraphNodeJson {
  id: string;
  label: string;
  kind: NodeKind;
}

export interface GraphEdgeJson {
  source: string;
  target: string;
  label: string;
}

export interface GraphJson {
  nodes: GraphNodeJson[];
  edges: GraphEdgeJson[];
}

export function elementNode(element: ElementJson): string {
  return "iri" in element ? element.iri : element.concept.id;
}

export function elementText(element: ElementJson): string {
  return "iri" in element ? element.iri : element.concept.text;
}

export function isConcept(element: ElementJson): boolean {
  return "concept" in element;
}
