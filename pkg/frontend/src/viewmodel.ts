// Graph view model: validated node-link data straight from the /graph
// payload, plus lookup indexes for click-to-inspect.

import type { GraphEdgeJson, GraphJson, GraphNodeJson, NodeKind } from "./types.js";

export interface GraphViewModel {
  nodes: GraphNodeJson[];
  edges: GraphEdgeJson[];
  byId: Map<string, GraphNodeJson>;
  neighbors: Map<string, string[]>;
  counts: { nodes: number; edges: number; byKind: Record<NodeKind, number> };
}

export class GraphPayloadError extends Error {}

export function buildGraphViewModel(payload: GraphJson): GraphViewModel {
  const byId = new Map<string, GraphNodeJson>();
  for (const node of payload.nodes) {
    if (byId.has(node.id)) {
      throw new GraphPayloadError(`duplicate node id: ${node.id}`);
    }
    byId.set(node.id, node);
  }
  const neighbors = new Map<string, string[]>();
  for (const edge of payload.edges) {
    if (!byId.has(edge.source) || !byId.has(edge.target)) {
      throw new GraphPayloadError(
        `edge ${edge.source} -[${edge.label}]-> ${edge.target} references a missing node`,
      );
    }
    neighbors.set(edge.source, [...(neighbors.get(edge.source) ?? []), edge.target]);
    neighbors.set(edge.target, [...(neighbors.get(edge.target) ?? []), edge.source]);
  }
  const byKind = { statement: 0, concept: 0, entity: 0, preference: 0, owner: 0 };
  for (const node of payload.nodes) byKind[node.kind] += 1;
  return {
    nodes: [...payload.nodes],
    edges: [...payload.edges],
    byId,
    neighbors,
    counts: { nodes: payload.nodes.length, edges: payload.edges.length, byKind },
  };
}
