// Mirrored session state. The model changes only in response to server
// messages (plus purely visual camera/drag bookkeeping elsewhere); it
// never invents or mutates composites locally.

import type {
  CandidateJson,
  CompositeJson,
  PairRelationJson,
  ServerMessage,
  ViewJson,
} from "./protocol.js";

export interface CommitNote {
  text: string;
  at: number; // model revision when the note arrived
}

export interface RenderModel {
  sessionId: string | null;
  views: ViewJson[];
  composites: CompositeJson[];
  relationPairs: PairRelationJson[];
  candidates: CandidateJson[];
  notes: CommitNote[];
  errorBanner: string | null;
  revision: number;
}

export function emptyModel(): RenderModel {
  return {
    sessionId: null,
    views: [],
    composites: [],
    relationPairs: [],
    candidates: [],
    notes: [],
    errorBanner: null,
    revision: 0,
  };
}

export function reduce(model: RenderModel, msg: ServerMessage): RenderModel {
  const rev = model.revision + 1;
  switch (msg.kind) {
    case "welcome":
      return { ...emptyModel(), sessionId: msg.sessionId, revision: rev };
    case "state":
      // candidates are re-announced after each event when non-empty, so a
      // state snapshot clears stale ones
      return {
        ...model,
        views: msg.views,
        composites: msg.composites,
        relationPairs: msg.relations.pairs,
        candidates: [],
        errorBanner: null,
        revision: rev,
      };
    case "candidates":
      return { ...model, candidates: msg.candidates, revision: rev };
    case "committed": {
      const text = msg.composite
        ? `committed ${msg.composite.type} ${msg.composite.id}`
        : `decomposed ${msg.decomposed} (${msg.trigger})`;
      const notes = [...model.notes, { text, at: rev }].slice(-6);
      return { ...model, notes, revision: rev };
    }
    case "error":
      return { ...model, errorBanner: `${msg.code}: ${msg.message}`, revision: rev };
  }
}

export function topCandidate(model: RenderModel): CandidateJson | null {
  return model.candidates.length ? model.candidates[0] : null;
}

export function viewById(model: RenderModel, id: string): ViewJson | undefined {
  return model.views.find((v) => v.id === id);
}

export function compositedViewIds(model: RenderModel): Set<string> {
  const out = new Set<string>();
  for (const c of model.composites) for (const id of c.constituents) out.add(id);
  return out;
}
