// Force-directed layout with a seeded PRNG: identical input and seed give
// identical positions, so graph snapshots are stable across reloads and
// visual tests.

import type { GraphViewModel } from "./viewmodel.js";

export interface LayoutPoint {
  id: string;
  x: number;
  y: number;
}

export interface LayoutOptions {
  seed?: number;
  width?: number;
  height?: number;
  iterations?: number;
}

// mulberry32: small, fast, good enough for jittering initial positions.
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function computeLayout(graph: GraphViewModel, options: LayoutOptions = {}): LayoutPoint[] {
  const { seed = 42, width = 800, height = 600, iterations = 150 } = options;
  const nodes = graph.nodes;
  if (nodes.length === 0) return [];

  const rand = mulberry32(seed);
  const index = new Map(nodes.map((node, i) => [node.id, i]));
  const xs = nodes.map(() => width / 2 + (rand() - 0.5) * width * 0.8);
  const ys = nodes.map(() => height / 2 + (rand() - 0.5) * height * 0.8);

  const springs = graph.edges.map((edge) => [
    index.get(edge.source) as number,
    index.get(edge.target) as number,
  ]);

  const area = width * height;
  const k = Math.sqrt(area / nodes.length);

  for (let step = 0; step < iterations; step++) {
    const temperature = (1 - step / iterations) * 0.1 * Math.min(width, height);
    const dx = nodes.map(() => 0);
    const dy = nodes.map(() => 0);

    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        let vx = (xs[i] as number) - (xs[j] as number);
        let vy = (ys[i] as number) - (ys[j] as number);
        let d2 = vx * vx + vy * vy;
        if (d2 === 0) {
          vx = 0.01 * (i - j);
          vy = 0.01;
          d2 = vx * vx + vy * vy;
        }
        const repulse = (k * k) / d2;
        dx[i] = (dx[i] as number) + vx * repulse;
        dy[i] = (dy[i] as number) + vy * repulse;
        dx[j] = (dx[j] as number) - vx * repulse;
        dy[j] = (dy[j] as number) - vy * repulse;
      }
    }
    for (const [a, b] of springs) {
      const vx = (xs[a as number] as number) - (xs[b as number] as number);
      const vy = (ys[a as number] as number) - (ys[b as number] as number);
      const distance = Math.sqrt(vx * vx + vy * vy) || 0.01;
      const attract = (distance * distance) / k / distance;
      dx[a as number] = (dx[a as number] as number) - vx * attract;
      dy[a as number] = (dy[a as number] as number) - vy * attract;
      dx[b as number] = (dx[b as number] as number) + vx * attract;
      dy[b as number] = (dy[b as number] as number) + vy * attract;
    }
    for (let i = 0; i < nodes.length; i++) {
      const mx = dx[i] as number;
      const my = dy[i] as number;
      const magnitude = Math.sqrt(mx * mx + my * my) || 1;
      const scale = Math.min(magnitude, temperature) / magnitude;
      xs[i] = (xs[i] as number) + mx * scale;
      ys[i] = (ys[i] as number) + my * scale;
      xs[i] = Math.max(20, Math.min(width - 20, xs[i] as number));
      ys[i] = Math.max(20, Math.min(height - 20, ys[i] as number));
    }
  }

  return nodes.map((node, i) => ({ id: node.id, x: xs[i] as number, y: ys[i] as number }));
}
