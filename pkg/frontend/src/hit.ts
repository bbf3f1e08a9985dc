// Screen-space picking: project part geometry through the camera and
// find what sits under the pointer, small targets before the panel body.

import type { OrbitCamera } from "./camera.js";
import type { TableJson, ViewJson } from "./protocol.js";
import {
  barLocalRect,
  handleLocal,
  anchorWorld,
  pcpAxisPositions,
  viewItems,
} from "./layout.js";
import { applyPose, type Vec3 } from "./vec.js";
import type { HitResult } from "./gesture.js";

const HANDLE_RADIUS_PX = 12;
const AXIS_GRAB_PX = 9;
const POINT_RADIUS_PX = 8;

interface Pick {
  hit: HitResult;
  depth: number;
  priority: number; // lower wins at similar depth: 0 handles/elements, 1 body
}

export function hitTest(
  camera: OrbitCamera,
  views: ViewJson[],
  tables: Map<string, TableJson>,
  sx: number,
  sy: number,
): HitResult | null {
  const picks: Pick[] = [];
  for (const view of views) {
    const table = tables.get(view.table);
    if (!table) continue;
    pickHandles(camera, view, sx, sy, picks);
    pickPcpAxes(camera, view, sx, sy, picks);
    pickElements(camera, view, table, sx, sy, picks);
    pickBody(camera, view, sx, sy, picks);
  }
  if (!picks.length) return null;
  picks.sort((a, b) => a.priority - b.priority || a.depth - b.depth);
  return picks[0].hit;
}

function projected(camera: OrbitCamera, world: Vec3) {
  return camera.project(world);
}

function pickHandles(
  camera: OrbitCamera,
  view: ViewJson,
  sx: number,
  sy: number,
  picks: Pick[],
) {
  if (!["scatterplot", "barchart", "linechart", "stackedbar"].includes(view.chart)) {
    return;
  }
  for (const axis of ["x", "y"] as const) {
    const world = applyPose(view.pose, handleLocal(view, axis));
    const p = projected(camera, world);
    if (!p) continue;
    const d = Math.hypot(p[0] - sx, p[1] - sy);
    if (d <= HANDLE_RADIUS_PX) {
      picks.push({
        priority: 0,
        depth: p[2],
        hit: {
          view: view.id,
          part: `axis-${axis}-handle`,
          center: world,
          pressPoint: world,
        },
      });
    }
  }
}

function pickPcpAxes(
  camera: OrbitCamera,
  view: ViewJson,
  sx: number,
  sy: number,
  picks: Pick[],
) {
  if (view.chart !== "pcp") return;
  const hy = view.halfExtents[1];
  pcpAxisPositions(view).forEach((x, i) => {
    const top = projected(camera, applyPose(view.pose, [x, hy, 0]));
    const bottom = projected(camera, applyPose(view.pose, [x, -hy, 0]));
    if (!top || !bottom) return;
    const d = segmentDistance(sx, sy, top, bottom);
    if (d <= AXIS_GRAB_PX) {
      const center = applyPose(view.pose, [x, 0, 0]);
      const p = projected(camera, center);
      picks.push({
        priority: 0,
        depth: p ? p[2] : top[2],
        hit: { view: view.id, part: `pcp-axis:${i}`, center, pressPoint: center },
      });
    }
  });
}

function pickElements(
  camera: OrbitCamera,
  view: ViewJson,
  table: TableJson,
  sx: number,
  sy: number,
  picks: Pick[],
) {
  if (view.chart === "barchart" || view.chart === "stackedbar") {
    for (const item of viewItems(view, table)) {
      const r = barLocalRect(view, table, item);
      const quad = [
        applyPose(view.pose, [r.x0, r.y0, 0]),
        applyPose(view.pose, [r.x1, r.y0, 0]),
        applyPose(view.pose, [r.x1, r.y1, 0]),
        applyPose(view.pose, [r.x0, r.y1, 0]),
      ];
      const screen = quad.map((w) => projected(camera, w));
      if (screen.some((p) => !p)) continue;
      if (pointInPolygon(sx, sy, screen as [number, number, number][])) {
        const center = applyPose(view.pose, [
          (r.x0 + r.x1) / 2,
          (r.y0 + r.y1) / 2,
          0,
        ]);
        const p = projected(camera, center)!;
        picks.push({
          priority: 0,
          depth: p[2],
          hit: {
            view: view.id,
            part: `element:${item}`,
            center,
            pressPoint: center,
          },
        });
      }
    }
    return;
  }
  if (view.chart === "graph" || view.chart === "scatterplot") {
    for (const item of viewItems(view, table)) {
      const world = anchorWorld(view, table, item);
      const p = projected(camera, world);
      if (!p) continue;
      if (Math.hypot(p[0] - sx, p[1] - sy) <= POINT_RADIUS_PX) {
        picks.push({
          priority: 0,
          depth: p[2],
          hit: { view: view.id, part: `element:${item}`, center: world, pressPoint: world },
        });
      }
    }
  }
}

function pickBody(
  camera: OrbitCamera,
  view: ViewJson,
  sx: number,
  sy: number,
  picks: Pick[],
) {
  const [hx, hy] = view.halfExtents;
  const corners: Vec3[] = [
    applyPose(view.pose, [-hx, -hy, 0]),
    applyPose(view.pose, [hx, -hy, 0]),
    applyPose(view.pose, [hx, hy, 0]),
    applyPose(view.pose, [-hx, hy, 0]),
  ];
  const screen = corners.map((w) => projected(camera, w));
  if (screen.some((p) => !p)) return;
  if (!pointInPolygon(sx, sy, screen as [number, number, number][])) return;
  const center = applyPose(view.pose, [0, 0, 0]);
  const p = projected(camera, center);
  if (!p) return;
  // press point: pointer ray dropped on the panel plane approximated by center
  picks.push({
    priority: 1,
    depth: p[2],
    hit: { view: view.id, part: "body", center, pressPoint: pressOnPanel(camera, center, sx, sy) },
  });
}

function pressOnPanel(camera: OrbitCamera, center: Vec3, sx: number, sy: number): Vec3 {
  return camera.planeHit(sx, sy, center) ?? center;
}

function pointInPolygon(
  x: number,
  y: number,
  poly: [number, number, number][],
): boolean {
  let inside = false;
  for (let i = 0, j = poly.length - 1; i < poly.length; j = i++) {
    const [xi, yi] = poly[i];
    const [xj, yj] = poly[j];
    if (yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi) {
      inside = !inside;
    }
  }
  return inside;
}

function segmentDistance(
  x: number,
  y: number,
  a: [number, number, number],
  b: [number, number, number],
): number {
  const dx = b[0] - a[0];
  const dy = b[1] - a[1];
  const len2 = dx * dx + dy * dy;
  const t = len2 ? Math.max(0, Math.min(1, ((x - a[0]) * dx + (y - a[1]) * dy) / len2)) : 0;
  return Math.hypot(x - (a[0] + t * dx), y - (a[1] + t * dy));
}
