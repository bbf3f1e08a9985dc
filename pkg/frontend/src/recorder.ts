// Session recorder: collects every outbound event so a live session can
// be downloaded as a .trace.jsonl and replayed through the CLI.

import type { EventJson } from "./protocol.js";

export class SessionRecorder {
  private events: EventJson[] = [];
  enabled = false;

  record(event: EventJson): void {
    if (this.enabled) this.events.push(event);
  }

  clear(): void {
    this.events = [];
  }

  count(): number {
    return this.events.length;
  }

  toTraceJsonl(): string {
    return this.events.map((e) => JSON.stringify(sortedEvent(e))).join("\n") + "\n";
  }
}

function sortedEvent(e: EventJson): EventJson {
  // stable field order keeps recordings diff-friendly
  const out: EventJson = { t: e.t, event: e.event };
  if (e.hand) out.hand = e.hand;
  if (e.target) out.target = { view: e.target.view, part: e.target.part };
  if (e.pose) out.pose = { pos: e.pose.pos, rot: e.pose.rot, scale: e.pose.scale };
  return out;
}
