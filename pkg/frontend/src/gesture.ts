// Pointer-to-event mapping: a press that hits a view part emits grab,
// drags emit move poses on a camera-parallel plane through the grab
// point (depth mode shifts along the view ray instead), release emits
// release. A keyboard toggle latches the current grab on one emulated
// hand and switches to the other, so bimanual gestures run
// sequentially-latched. Every emitted sequence is a well-formed trace
// fragment: per hand, grab precedes moves precedes release, timestamps
// never regress.

import type { EventJson } from "./protocol.js";
import type { Vec3 } from "./vec.js";

export type Hand = "left" | "right";

export interface HitResult {
  view: string;
  part: string; // wire form: body | axis-x-handle | ... | element:<id>
  /** world center of the part; the engine anchors the grab here */
  center: Vec3;
  /** world point under the pointer at press time */
  pressPoint: Vec3;
}

export interface DragMapping {
  /** pointer to world on the drag plane through `anchor`; null = off-plane */
  planePoint(sx: number, sy: number, anchor: Vec3): Vec3 | null;
  /** shift a world point along the depth axis by a pixel delta */
  depthPoint(current: Vec3, dyPixels: number): Vec3;
}

export interface GestureSink {
  (event: EventJson): void;
}

interface ActiveDrag {
  hand: Hand;
  anchor: Vec3; // part center at grab: the hand's reference point
  pressOffset: Vec3; // pressPoint - anchor, subtracted to avoid jumps
  last: Vec3; // last emitted hand position
}

export class GestureController {
  activeHand: Hand = "left";
  private drag: ActiveDrag | null = null;
  private latched: Map<Hand, ActiveDrag> = new Map();
  private clock = 0;

  constructor(
    private send: GestureSink,
    private mapping: DragMapping,
    private now?: () => number,
  ) {}

  private time(): number {
    const t = this.now ? this.now() : this.clock + 0.016;
    this.clock = Math.max(this.clock, t);
    return this.clock;
  }

  private handBusy(hand: Hand): boolean {
    return (this.drag !== null && this.drag.hand === hand) || this.latched.has(hand);
  }

  /** Press on a hit part; returns false when the hand is occupied. */
  pointerDown(hit: HitResult): boolean {
    if (this.drag !== null || this.handBusy(this.activeHand)) return false;
    this.send({
      t: this.time(),
      event: "grab",
      hand: this.activeHand,
      target: { view: hit.view, part: hit.part },
    });
    this.drag = {
      hand: this.activeHand,
      anchor: hit.center,
      pressOffset: [
        hit.pressPoint[0] - hit.center[0],
        hit.pressPoint[1] - hit.center[1],
        hit.pressPoint[2] - hit.center[2],
      ],
      last: hit.center,
    };
    return true;
  }

  pointerMove(sx: number, sy: number, depthMode = false, dyPixels = 0): void {
    if (!this.drag) return;
    let pos: Vec3 | null;
    if (depthMode) {
      pos = this.mapping.depthPoint(this.drag.last, dyPixels);
    } else {
      const hitAnchor: Vec3 = [
        this.drag.anchor[0] + this.drag.pressOffset[0],
        this.drag.anchor[1] + this.drag.pressOffset[1],
        this.drag.anchor[2] + this.drag.pressOffset[2],
      ];
      const onPlane = this.mapping.planePoint(sx, sy, hitAnchor);
      pos = onPlane
        ? [
            onPlane[0] - this.drag.pressOffset[0],
            onPlane[1] - this.drag.pressOffset[1],
            onPlane[2] - this.drag.pressOffset[2],
          ]
        : null;
    }
    if (!pos) return;
    this.drag.last = pos;
    this.send({
      t: this.time(),
      event: "move",
      hand: this.drag.hand,
      pose: { pos: [...pos], rot: [0, 0, 0, 1], scale: 1 },
    });
  }

  pointerUp(): void {
    if (!this.drag) return;
    this.send({ t: this.time(), event: "release", hand: this.drag.hand });
    this.drag = null;
  }

  /**
   * Latch the in-flight grab (the hand keeps holding) and switch the
   * active hand; with no drag in flight it just switches hands.
   */
  toggleHand(): Hand {
    if (this.drag) {
      this.latched.set(this.drag.hand, this.drag);
      this.drag = null;
    }
    this.activeHand = this.activeHand === "left" ? "right" : "left";
    return this.activeHand;
  }

  /** Release a latched hand (or the active drag) explicitly. */
  releaseHand(hand: Hand): void {
    if (this.drag && this.drag.hand === hand) {
      this.pointerUp();
      return;
    }
    if (this.latched.delete(hand)) {
      this.send({ t: this.time(), event: "release", hand });
    }
  }

  releaseAll(): void {
    this.pointerUp();
    for (const hand of [...this.latched.keys()]) this.releaseHand(hand);
  }

  tick(): void {
    this.send({ t: this.time(), event: "tick" });
  }

  holding(): { hand: Hand; latched: boolean }[] {
    const out: { hand: Hand; latched: boolean }[] = [];
    if (this.drag) out.push({ hand: this.drag.hand, latched: false });
    for (const hand of this.latched.keys()) out.push({ hand, latched: true });
    return out;
  }
}

/** Per-hand well-formedness check used by tests and the recorder. */
export function traceIsWellFormed(events: EventJson[]): string | null {
  const holding: Record<Hand, boolean> = { left: false, right: false };
  let last = -Infinity;
  for (const [i, e] of events.entries()) {
    if (e.t < last) return `line ${i + 1}: time regresses`;
    last = e.t;
    if (e.event === "tick") continue;
    const hand = e.hand as Hand;
    if (!hand) return `line ${i + 1}: ${e.event} without a hand`;
    if (e.event === "grab") {
      if (holding[hand]) return `line ${i + 1}: ${hand} grabs while holding`;
      if (!e.target) return `line ${i + 1}: grab without target`;
      holding[hand] = true;
    } else if (e.event === "move") {
      if (!holding[hand]) return `line ${i + 1}: ${hand} moves while empty`;
      if (!e.pose) return `line ${i + 1}: move without pose`;
    } else if (e.event === "release") {
      if (!holding[hand]) return `line ${i + 1}: ${hand} releases while empty`;
      holding[hand] = false;
    }
  }
  return null;
}
