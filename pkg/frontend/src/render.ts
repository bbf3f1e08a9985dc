// Canvas painter: draws posed panels with their marks, then the
// feedback primitives (ghosts, links, placed glyphs, region highlights).

import type { OrbitCamera } from "./camera.js";
import { allFeedback, type Primitive } from "./feedback.js";
import {
  anchorWorld,
  barLocalRect,
  handleLocal,
  pcpAxisPositions,
  normalized,
  viewItems,
} from "./layout.js";
import type { RenderModel } from "./model.js";
import type { TableJson, ViewJson } from "./protocol.js";
import { applyPose, type Vec3 } from "./vec.js";

const PANEL = "#4a5568";
const MARK = "#63b3ed";
const MARK2 = "#f6ad55";
const LINK = "#68d391";
const GHOST = "#a0aec0";
const GLOW = "rgba(104, 211, 145, 0.25)";

export function draw(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  model: RenderModel,
  tables: Map<string, TableJson>,
  holding: { hand: string; latched: boolean }[],
): void {
  ctx.clearRect(0, 0, camera.width, camera.height);
  drawFloor(ctx, camera);
  const absorbed = absorbedClientIds(model);
  const hiddenPcpPairs = hiddenPolylines(model);
  for (const view of model.views) {
    const table = tables.get(view.table);
    drawPanel(ctx, camera, view, absorbed.has(view.id));
    if (table && !absorbed.has(view.id)) {
      drawMarks(ctx, camera, view, table, hiddenPcpPairs.get(view.id) ?? new Set());
    }
  }
  for (const primitive of allFeedback(model)) {
    drawPrimitive(ctx, camera, primitive);
  }
  drawHud(ctx, model, holding);
}

function absorbedClientIds(model: RenderModel): Set<string> {
  const out = new Set<string>();
  for (const c of model.composites) {
    if (c.anchors) out.add(c.anchors.client);
    if (c.nests) out.add(c.nests.client);
    if (c.overload) out.add(c.overload.client);
    if (c.layout && c.layout.mode !== "proximity") out.add(c.layout.source);
  }
  return out;
}

function hiddenPolylines(model: RenderModel): Map<string, Set<number>> {
  const out = new Map<string, Set<number>>();
  for (const c of model.composites) {
    if (!c.overload) continue;
    const set = out.get(c.overload.pcp) ?? new Set<number>();
    set.add(c.overload.hidden[0]);
    out.set(c.overload.pcp, set);
  }
  return out;
}

function seg(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  a: Vec3,
  b: Vec3,
): void {
  const pa = camera.project(a);
  const pb = camera.project(b);
  if (!pa || !pb) return;
  ctx.beginPath();
  ctx.moveTo(pa[0], pa[1]);
  ctx.lineTo(pb[0], pb[1]);
  ctx.stroke();
}

function polygon(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  pts: Vec3[],
  close = true,
): boolean {
  const screen = pts.map((p) => camera.project(p));
  if (screen.some((p) => !p)) return false;
  ctx.beginPath();
  screen.forEach((p, i) => (i ? ctx.lineTo(p![0], p![1]) : ctx.moveTo(p![0], p![1])));
  if (close) ctx.closePath();
  return true;
}

function drawFloor(ctx: CanvasRenderingContext2D, camera: OrbitCamera): void {
  ctx.strokeStyle = "#2d3748";
  ctx.lineWidth = 1;
  for (let i = -4; i <= 4; i++) {
    seg(ctx, camera, [i * 0.5, -0.6, -2], [i * 0.5, -0.6, 2]);
    seg(ctx, camera, [-2, -0.6, i * 0.5], [2, -0.6, i * 0.5]);
  }
}

function drawPanel(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  view: ViewJson,
  dimmed: boolean,
): void {
  const [hx, hy] = view.halfExtents;
  const corners: Vec3[] = [
    applyPose(view.pose, [-hx, -hy, 0]),
    applyPose(view.pose, [hx, -hy, 0]),
    applyPose(view.pose, [hx, hy, 0]),
    applyPose(view.pose, [-hx, hy, 0]),
  ];
  ctx.strokeStyle = dimmed ? "#2d3748" : PANEL;
  ctx.lineWidth = dimmed ? 1 : 1.5;
  if (polygon(ctx, camera, corners)) ctx.stroke();
  const label = camera.project(applyPose(view.pose, [-hx, hy + 0.04, 0]));
  if (label) {
    ctx.fillStyle = dimmed ? "#4a5568" : "#a0aec0";
    ctx.font = "11px sans-serif";
    ctx.fillText(view.id, label[0], label[1]);
  }
  if (["scatterplot", "barchart", "linechart", "stackedbar"].includes(view.chart)) {
    for (const axis of ["x", "y"] as const) {
      const h = camera.project(applyPose(view.pose, handleLocal(view, axis)));
      if (h) {
        ctx.fillStyle = "#ed8936";
        ctx.fillRect(h[0] - 4, h[1] - 4, 8, 8);
      }
    }
  }
}

function drawMarks(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  view: ViewJson,
  table: TableJson,
  hiddenPairs: Set<number>,
): void {
  const [, hy] = view.halfExtents;
  switch (view.chart) {
    case "scatterplot":
    case "graph": {
      if (view.chart === "graph") {
        const edges = (view.encodings["edges"] as [string, string][]) ?? [];
        ctx.strokeStyle = PANEL;
        for (const [a, b] of edges) {
          seg(ctx, camera, anchorWorld(view, table, a), anchorWorld(view, table, b));
        }
      }
      for (const item of viewItems(view, table)) {
        const p = camera.project(anchorWorld(view, table, item));
        if (!p) continue;
        ctx.fillStyle = MARK;
        ctx.beginPath();
        ctx.arc(p[0], p[1], view.chart === "graph" ? 7 : 3.5, 0, Math.PI * 2);
        ctx.fill();
      }
      break;
    }
    case "barchart":
    case "stackedbar": {
      for (const item of viewItems(view, table)) {
        const r = barLocalRect(view, table, item);
        const quad: Vec3[] = [
          applyPose(view.pose, [r.x0, r.y0, 0]),
          applyPose(view.pose, [r.x1, r.y0, 0]),
          applyPose(view.pose, [r.x1, r.y1, 0]),
          applyPose(view.pose, [r.x0, r.y1, 0]),
        ];
        ctx.fillStyle = view.chart === "stackedbar" ? MARK2 : MARK;
        if (polygon(ctx, camera, quad)) ctx.fill();
      }
      break;
    }
    case "linechart": {
      const items = viewItems(view, table);
      ctx.strokeStyle = MARK;
      ctx.lineWidth = 2;
      const pts = items.map((i) => anchorWorld(view, table, i));
      if (polygon(ctx, camera, pts, false)) ctx.stroke();
      ctx.lineWidth = 1;
      break;
    }
    case "map": {
      const regions = view.encodings["regions"] as { key: string; polygon: number[][] }[];
      const values = view.encodings["value"]
        ? normalized(table, view.encodings["value"] as string)
        : null;
      for (const region of regions) {
        const pts = region.polygon.map(
          (p) => applyPose(view.pose, [p[0], p[1], 0]),
        );
        const shade = values ? 0.25 + 0.6 * (values.get(region.key) ?? 0.5) : 0.4;
        ctx.fillStyle = `rgba(99, 179, 237, ${shade.toFixed(3)})`;
        ctx.strokeStyle = PANEL;
        if (polygon(ctx, camera, pts)) {
          ctx.fill();
          ctx.stroke();
        }
      }
      break;
    }
    case "pcp": {
      const axes = view.encodings["axes"] as string[];
      const xs = pcpAxisPositions(view);
      ctx.strokeStyle = "#718096";
      xs.forEach((x) => {
        seg(
          ctx, camera,
          applyPose(view.pose, [x, -hy, 0]),
          applyPose(view.pose, [x, hy, 0]),
        );
      });
      ctx.strokeStyle = MARK;
      for (const item of viewItems(view, table)) {
        for (let i = 0; i < axes.length - 1; i++) {
          if (hiddenPairs.has(i)) continue;
          const na = normalized(table, axes[i]).get(item) ?? 0.5;
          const nb = normalized(table, axes[i + 1]).get(item) ?? 0.5;
          seg(
            ctx, camera,
            applyPose(view.pose, [xs[i], -hy + 2 * hy * na, 0]),
            applyPose(view.pose, [xs[i + 1], -hy + 2 * hy * nb, 0]),
          );
        }
      }
      break;
    }
  }
}

function drawPrimitive(
  ctx: CanvasRenderingContext2D,
  camera: OrbitCamera,
  prim: Primitive,
): void {
  switch (prim.kind) {
    case "ghost-link":
      ctx.strokeStyle = GHOST;
      ctx.setLineDash([6, 4]);
      seg(ctx, camera, prim.from, prim.to);
      ctx.setLineDash([]);
      break;
    case "link":
      ctx.strokeStyle = LINK;
      seg(ctx, camera, prim.from, prim.to);
      break;
    case "glow-quad":
      ctx.fillStyle = GLOW;
      if (polygon(ctx, camera, prim.corners)) ctx.fill();
      break;
    case "region-rect":
      ctx.strokeStyle = MARK2;
      ctx.setLineDash([4, 3]);
      if (polygon(ctx, camera, prim.corners)) ctx.stroke();
      ctx.setLineDash([]);
      break;
    case "glyph": {
      const p = camera.project(prim.at);
      if (p) {
        const size = Math.max(3, 40 * prim.scale);
        ctx.fillStyle = MARK2;
        ctx.fillRect(p[0] - size / 2, p[1] - size, size, size);
      }
      break;
    }
    case "embedded-point": {
      const p = camera.project(prim.at);
      if (p) {
        ctx.fillStyle = "#fc8181";
        ctx.beginPath();
        ctx.arc(p[0], p[1], 3, 0, Math.PI * 2);
        ctx.fill();
      }
      break;
    }
    case "panel-frame":
      ctx.strokeStyle = GHOST;
      if (prim.dashed) ctx.setLineDash([5, 4]);
      if (polygon(ctx, camera, prim.corners)) ctx.stroke();
      ctx.setLineDash([]);
      break;
    case "badge":
      ctx.fillStyle = "#fc8181";
      ctx.font = "12px sans-serif";
      ctx.fillText(prim.text, 12, 44);
      break;
  }
}

function drawHud(
  ctx: CanvasRenderingContext2D,
  model: RenderModel,
  holding: { hand: string; latched: boolean }[],
): void {
  ctx.fillStyle = "#e2e8f0";
  ctx.font = "12px sans-serif";
  let y = 20;
  for (const note of model.notes.slice(-3)) {
    ctx.fillText(note.text, 12, y);
    y += 16;
  }
  const held = holding
    .map((h) => `${h.hand}${h.latched ? " (latched)" : ""}`)
    .join(", ");
  if (held) ctx.fillText(`holding: ${held}`, 12, y);
  if (model.candidates.length) {
    const top = model.candidates[0];
    ctx.fillStyle = "#68d391";
    ctx.fillText(
      `candidate: ${top.type} [${top.constituents.join(" + ")}]`,
      12,
      y + 16,
    );
  }
}
