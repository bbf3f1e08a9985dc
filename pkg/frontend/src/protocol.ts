// Message and payload shapes for server protocolVersion 1. The client
// never derives composition state itself; it mirrors what these carry.

import type { PoseJson } from "./vec.js";

export const PROTOCOL_VERSION = 1;

export interface ColumnJson {
  name: string;
  kind: "categorical" | "quantitative";
}

export interface TableJson {
  name: string;
  key: string;
  columns: ColumnJson[];
  rows: Record<string, string | number>[];
}

export interface ViewJson {
  id: string;
  chart:
    | "scatterplot"
    | "barchart"
    | "linechart"
    | "stackedbar"
    | "map"
    | "pcp"
    | "graph";
  table: string;
  encodings: Record<string, unknown>;
  halfExtents: [number, number, number];
  pose: PoseJson;
}

export interface ManifestJson {
  tables: TableJson[];
  relationships?: unknown[];
  views: ViewJson[];
  thresholds?: Record<string, number>;
}

export interface CandidateJson {
  type: string;
  constituents: string[];
  rank: number;
  admissible: boolean;
  context: Record<string, unknown>;
}

export interface PairRelationJson {
  a: string;
  b: string;
  gap: number;
  orientationAngle: number;
  colliding: boolean;
  latched: boolean;
}

export interface CompositeJson {
  id: string;
  type: string;
  constituents: string[];
  views: ViewJson[];
  transforms: { element: string; start: PoseJson; target: PoseJson }[];
  links?: {
    a: string;
    b: string;
    segments: { aItem: unknown; bItem: unknown; endA: number[]; endB: number[] }[];
  }[];
  anchors?: {
    host: string;
    client: string;
    entries: { item: unknown; region: unknown; target: PoseJson }[];
  };
  nests?: {
    host: string;
    client: string;
    placements: { element: unknown; row: unknown; target: PoseJson; scale: number }[];
  };
  overload?: {
    pcp: string;
    client: string;
    axisPair: [number, number];
    rect: [number, number, number, number];
    points: { row: unknown; x: number; y: number }[];
    hidden: [number, number];
  };
  layout?: {
    source: string;
    mode: string;
    binsX: number;
    binsY: number;
    axisX: string | null;
    axisY: string | null;
    gap: number;
    curvature: number;
    panels: {
      view: ViewJson;
      col: number;
      row: number;
      xInterval: number[] | null;
      yInterval: number[] | null;
      rows: unknown[];
    }[];
  };
}

export interface StateMessage {
  kind: "state";
  views: ViewJson[];
  composites: CompositeJson[];
  relations: { pairs: PairRelationJson[] };
}

export type ServerMessage =
  | { kind: "welcome"; sessionId: string }
  | StateMessage
  | { kind: "candidates"; candidates: CandidateJson[] }
  | { kind: "committed"; composite?: CompositeJson; decomposed?: string; trigger?: string }
  | { kind: "error"; code: string; message: string };

export interface EventJson {
  t: number;
  event: "grab" | "move" | "release" | "tick";
  hand?: "left" | "right";
  target?: { view: string; part: string };
  pose?: PoseJson;
}

export type ClientMessage =
  | { kind: "hello"; protocolVersion: number }
  | { kind: "load"; manifest: ManifestJson }
  | { kind: "event"; event: EventJson };

export function parseServerMessage(text: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const kind = (obj as { kind?: unknown }).kind;
  if (
    kind === "welcome" ||
    kind === "state" ||
    kind === "candidates" ||
    kind === "committed" ||
    kind === "error"
  ) {
    return obj as ServerMessage;
  }
  return null;
}

export function hello(): ClientMessage {
  return { kind: "hello", protocolVersion: PROTOCOL_VERSION };
}

export function loadManifest(manifest: ManifestJson): ClientMessage {
  return { kind: "load", manifest };
}

export function eventMessage(event: EventJson): ClientMessage {
  return { kind: "event", event };
}
