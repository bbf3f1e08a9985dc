// Chart-local mark layout, mirroring the engine's conventions so marks
// and hit targets line up with what the server computes: panels span
// x in [-hx, hx], y in [-hy, hy] at z = 0; bars left to right in key
// order; min-max normalized channels.

import type { TableJson, ViewJson } from "./protocol.js";
import { applyPose, type Vec3 } from "./vec.js";

export type ItemKey = string | number;

function sortKeys(keys: ItemKey[]): ItemKey[] {
  return [...keys].sort((a, b) => {
    const sa = typeof a === "string", sb = typeof b === "string";
    if (sa !== sb) return sa ? 1 : -1;
    return a < b ? -1 : a > b ? 1 : 0;
  });
}

export function viewItems(view: ViewJson, table: TableJson): ItemKey[] {
  const single = view.encodings["item"];
  if (single !== undefined) return [single as ItemKey];
  return sortKeys(table.rows.map((r) => r[table.key] as ItemKey));
}

export function normalized(table: TableJson, column: string): Map<ItemKey, number> {
  const vals = table.rows.map((r) => Number(r[column]));
  const lo = Math.min(...vals);
  const hi = Math.max(...vals);
  const out = new Map<ItemKey, number>();
  table.rows.forEach((r, i) => {
    out.set(r[table.key] as ItemKey, hi === lo ? 0.5 : (vals[i] - lo) / (hi - lo));
  });
  return out;
}

export function stackHeights(view: ViewJson, table: TableJson): Map<ItemKey, number> {
  const cols = view.encodings["values"] as string[];
  const totals = new Map<ItemKey, number>();
  for (const r of table.rows) {
    totals.set(
      r[table.key] as ItemKey,
      cols.reduce((s, c) => s + Number(r[c]), 0),
    );
  }
  const hi = Math.max(...totals.values());
  const out = new Map<ItemKey, number>();
  for (const [k, v] of totals) out.set(k, hi === 0 ? 0.5 : v / hi);
  return out;
}

export function barCenters(view: ViewJson, table: TableJson): Map<ItemKey, number> {
  const items = viewItems(view, table);
  const hx = view.halfExtents[0];
  const width = (2 * hx) / items.length;
  const out = new Map<ItemKey, number>();
  items.forEach((k, i) => out.set(k, -hx + (i + 0.5) * width));
  return out;
}

export function linePositions(view: ViewJson, table: TableJson): Map<ItemKey, number> {
  const items = viewItems(view, table);
  const hx = view.halfExtents[0];
  const out = new Map<ItemKey, number>();
  if (items.length === 1) {
    out.set(items[0], 0);
    return out;
  }
  items.forEach((k, i) => out.set(k, -hx + (i * 2 * hx) / (items.length - 1)));
  return out;
}

export function pcpAxisPositions(view: ViewJson): number[] {
  const axes = (view.encodings["axes"] as string[]) ?? [];
  const hx = view.halfExtents[0];
  if (axes.length === 1) return [0];
  return axes.map((_, i) => -hx + (i * 2 * hx) / (axes.length - 1));
}

/** World position of an item's mark (bar top, point, node, centroid...). */
export function anchorWorld(view: ViewJson, table: TableJson, item: ItemKey): Vec3 {
  return applyPose(view.pose, anchorLocal(view, table, item));
}

export function anchorLocal(view: ViewJson, table: TableJson, item: ItemKey): Vec3 {
  const [hx, hy] = view.halfExtents;
  switch (view.chart) {
    case "scatterplot": {
      const nx = normalized(table, view.encodings["x"] as string).get(item) ?? 0.5;
      const ny = normalized(table, view.encodings["y"] as string).get(item) ?? 0.5;
      return [-hx + 2 * hx * nx, -hy + 2 * hy * ny, 0];
    }
    case "barchart": {
      const x = barCenters(view, table).get(item) ?? 0;
      const n = normalized(table, view.encodings["value"] as string).get(item) ?? 0.5;
      return [x, hy * (2 * n - 1), 0];
    }
    case "stackedbar": {
      const x = barCenters(view, table).get(item) ?? 0;
      const n = stackHeights(view, table).get(item) ?? 0.5;
      return [x, hy * (2 * n - 1), 0];
    }
    case "linechart": {
      const x = linePositions(view, table).get(item) ?? 0;
      const n = normalized(table, view.encodings["value"] as string).get(item) ?? 0.5;
      return [x, hy * (2 * n - 1), 0];
    }
    case "map": {
      const regions = view.encodings["regions"] as { key: ItemKey; polygon: number[][] }[];
      const region = regions.find((r) => r.key === item);
      if (!region) return [0, 0, 0];
      const [cx, cy] = polygonCentroid(region.polygon);
      return [cx, cy, 0];
    }
    case "graph": {
      const nodes = view.encodings["nodes"] as { key: ItemKey; pos: number[] }[];
      const node = nodes.find((n) => n.key === item);
      return node ? [node.pos[0], node.pos[1], 0] : [0, 0, 0];
    }
    case "pcp": {
      const axes = view.encodings["axes"] as string[];
      const xs = pcpAxisPositions(view);
      let sx = 0, sy = 0;
      axes.forEach((col, i) => {
        const n = normalized(table, col).get(item) ?? 0.5;
        sx += xs[i];
        sy += -hy + 2 * hy * n;
      });
      return [sx / axes.length, sy / axes.length, 0];
    }
  }
}

export function polygonCentroid(points: number[][]): [number, number] {
  let area2 = 0, cx = 0, cy = 0;
  const n = points.length;
  for (let i = 0; i < n; i++) {
    const [x0, y0] = points[i];
    const [x1, y1] = points[(i + 1) % n];
    const c = x0 * y1 - x1 * y0;
    area2 += c;
    cx += (x0 + x1) * c;
    cy += (y0 + y1) * c;
  }
  if (Math.abs(area2) < 1e-12) {
    return [
      points.reduce((s, p) => s + p[0], 0) / n,
      points.reduce((s, p) => s + p[1], 0) / n,
    ];
  }
  return [cx / (3 * area2), cy / (3 * area2)];
}

/** Local rects for grabbable elements (bars), handles, pcp axes. */
export function barLocalRect(
  view: ViewJson,
  table: TableJson,
  item: ItemKey,
): { x0: number; y0: number; x1: number; y1: number } {
  const [hx, hy] = view.halfExtents;
  const items = viewItems(view, table);
  const x = barCenters(view, table).get(item) ?? 0;
  const half = hx / items.length;
  const n =
    view.chart === "stackedbar"
      ? stackHeights(view, table).get(item) ?? 0.5
      : normalized(table, view.encodings["value"] as string).get(item) ?? 0.5;
  return { x0: x - half, y0: -hy, x1: x + half, y1: -hy + 2 * hy * n };
}

export function handleLocal(view: ViewJson, axis: "x" | "y"): Vec3 {
  const [hx, hy] = view.halfExtents;
  return axis === "x" ? [hx, -hy, 0] : [-hx, hy, 0];
}
