// Turns candidates and committed composites into drawable primitives.
// Pure and headless so the feedback mapping is testable without a
// canvas; the painter consumes the primitive list.

import type { RenderModel } from "./model.js";
import { topCandidate, viewById } from "./model.js";
import type { CompositeJson, ViewJson } from "./protocol.js";
import { pcpAxisPositions } from "./layout.js";
import { applyPose, type Vec3 } from "./vec.js";

export type Primitive =
  | { kind: "ghost-link"; from: Vec3; to: Vec3 }
  | { kind: "glow-quad"; corners: Vec3[]; label: string }
  | { kind: "link"; from: Vec3; to: Vec3 }
  | { kind: "glyph"; at: Vec3; scale: number; label: string }
  | { kind: "embedded-point"; at: Vec3 }
  | { kind: "region-rect"; corners: Vec3[] }
  | { kind: "panel-frame"; corners: Vec3[]; dashed: boolean }
  | { kind: "badge"; text: string };

function panelCorners(view: ViewJson): Vec3[] {
  const [hx, hy] = view.halfExtents;
  return [
    applyPose(view.pose, [-hx, -hy, 0]),
    applyPose(view.pose, [hx, -hy, 0]),
    applyPose(view.pose, [hx, hy, 0]),
    applyPose(view.pose, [-hx, hy, 0]),
  ];
}

function regionCorners(pcp: ViewJson, i: number): Vec3[] {
  const xs = pcpAxisPositions(pcp);
  const hy = pcp.halfExtents[1];
  return [
    applyPose(pcp.pose, [xs[i], -hy, 0]),
    applyPose(pcp.pose, [xs[i + 1], -hy, 0]),
    applyPose(pcp.pose, [xs[i + 1], hy, 0]),
    applyPose(pcp.pose, [xs[i], hy, 0]),
  ];
}

/** Ghost/highlight primitives for the top-ranked candidate. */
export function candidateFeedback(model: RenderModel): Primitive[] {
  const top = topCandidate(model);
  if (!top) return [];
  const out: Primitive[] = [];
  if (top.type === "integrated" || top.type === "juxtaposed") {
    const [a, b] = top.constituents.map((id) => viewById(model, id));
    if (a && b) {
      out.push({
        kind: "ghost-link",
        from: applyPose(a.pose, [0, 0, 0]),
        to: applyPose(b.pose, [0, 0, 0]),
      });
      out.push({ kind: "panel-frame", corners: panelCorners(a), dashed: true });
      out.push({ kind: "panel-frame", corners: panelCorners(b), dashed: true });
    }
  } else if (top.type === "superimposed") {
    const host = viewById(model, String(top.context["host"] ?? top.constituents[0]));
    if (host) {
      out.push({ kind: "glow-quad", corners: panelCorners(host), label: "drop to superimpose" });
    }
  } else if (top.type === "overloaded") {
    const pcp = viewById(model, String(top.context["pcp"] ?? top.constituents[0]));
    const region = Number(top.context["region"] ?? 0);
    if (pcp) out.push({ kind: "region-rect", corners: regionCorners(pcp, region) });
  } else if (top.type === "nested") {
    const host = viewById(model, String(top.context["host"] ?? top.constituents[0]));
    if (host) {
      out.push({ kind: "glow-quad", corners: panelCorners(host), label: `nest in ${top.context["seed"]}` });
    }
  }
  return out;
}

/** Primitives for one committed composite, by payload kind. */
export function compositeFeedback(
  composite: CompositeJson,
  model: RenderModel,
): Primitive[] {
  const out: Primitive[] = [];
  if (composite.links) {
    for (const group of composite.links) {
      for (const seg of group.segments) {
        out.push({ kind: "link", from: seg.endA as Vec3, to: seg.endB as Vec3 });
      }
    }
  } else if (composite.anchors) {
    for (const entry of composite.anchors.entries) {
      out.push({
        kind: "glyph",
        at: entry.target.pos as Vec3,
        scale: entry.target.scale,
        label: String(entry.item),
      });
    }
  } else if (composite.nests) {
    for (const p of composite.nests.placements) {
      out.push({
        kind: "glyph",
        at: p.target.pos as Vec3,
        scale: p.scale,
        label: String(p.row),
      });
    }
  } else if (composite.overload) {
    const pcp =
      viewById(model, composite.overload.pcp) ??
      composite.views.find((v) => v.id === composite.overload!.pcp);
    if (pcp) {
      const [x0, y0, x1, y1] = composite.overload.rect;
      out.push({
        kind: "region-rect",
        corners: [
          applyPose(pcp.pose, [x0, y0, 0]),
          applyPose(pcp.pose, [x1, y0, 0]),
          applyPose(pcp.pose, [x1, y1, 0]),
          applyPose(pcp.pose, [x0, y1, 0]),
        ],
      });
      for (const pt of composite.overload.points) {
        out.push({
          kind: "embedded-point",
          at: applyPose(pcp.pose, [x0 + pt.x * (x1 - x0), y0 + pt.y * (y1 - y0), 0]),
        });
      }
    }
  } else if (composite.layout) {
    for (const panel of composite.layout.panels) {
      out.push({ kind: "panel-frame", corners: panelCorners(panel.view), dashed: false });
    }
  } else {
    out.push({ kind: "badge", text: `unsupported composite ${composite.type}` });
  }
  return out;
}

export function allFeedback(model: RenderModel): Primitive[] {
  const out = candidateFeedback(model);
  for (const composite of model.composites) {
    out.push(...compositeFeedback(composite, model));
  }
  return out;
}
