// Playground wiring: websocket session, orbit camera, pointer gestures,
// recording, and the render loop.

import { OrbitCamera } from "./camera.js";
import { GestureController } from "./gesture.js";
import { hitTest } from "./hit.js";
import { MANIFESTS } from "./manifests.js";
import { emptyModel, reduce, type RenderModel } from "./model.js";
import {
  eventMessage,
  hello,
  loadManifest,
  parseServerMessage,
  type EventJson,
  type TableJson,
} from "./protocol.js";
import { SessionRecorder } from "./recorder.js";
import { draw } from "./render.js";

const canvas = document.getElementById("scene") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const manifestSelect = document.getElementById("manifest") as HTMLSelectElement;
const connectButton = document.getElementById("connect") as HTMLButtonElement;
const recordButton = document.getElementById("record") as HTMLButtonElement;
const handBadge = document.getElementById("hand") as HTMLSpanElement;
const banner = document.getElementById("banner") as HTMLDivElement;

for (const name of Object.keys(MANIFESTS)) {
  const option = document.createElement("option");
  option.value = name;
  option.textContent = `${name} demo`;
  manifestSelect.appendChild(option);
}

const camera = new OrbitCamera();
let model: RenderModel = emptyModel();
let tables = new Map<string, TableJson>();
let socket: WebSocket | null = null;
let loaded = false;
let clockBase = 0;
const recorder = new SessionRecorder();

function nowSeconds(): number {
  return (performance.now() - clockBase) / 1000;
}

function sendEvent(event: EventJson): void {
  if (!socket || socket.readyState !== WebSocket.OPEN || !loaded) return;
  recorder.record(event);
  socket.send(JSON.stringify(eventMessage(event)));
}

const gestures = new GestureController(
  sendEvent,
  {
    planePoint: (sx, sy, anchor) => camera.planeHit(sx, sy, anchor),
    depthPoint: (current, dy) => camera.depthShift(current, dy),
  },
  nowSeconds,
);

function setBanner(text: string | null, isError = false): void {
  banner.textContent = text ?? "";
  banner.className = text ? (isError ? "banner error" : "banner") : "banner hidden";
}

function connect(): void {
  socket?.close();
  loaded = false;
  model = emptyModel();
  const choice = manifestSelect.value;
  const manifest = MANIFESTS[choice];
  tables = new Map(manifest.tables.map((t) => [t.name, t]));
  const url = `${location.protocol === "https:" ? "wss" : "ws"}://${location.host}/session`;
  setBanner(`connecting to ${url}...`);
  socket = new WebSocket(url);
  socket.onopen = () => {
    clockBase = performance.now();
    recorder.clear();
    socket!.send(JSON.stringify(hello()));
    socket!.send(JSON.stringify(loadManifest(manifest)));
    loaded = true;
    setBanner(null);
  };
  socket.onmessage = (frame) => {
    const msg = parseServerMessage(String(frame.data));
    if (msg) model = reduce(model, msg);
    if (msg?.kind === "error") setBanner(`${msg.code}: ${msg.message}`, true);
  };
  socket.onclose = () => {
    loaded = false;
    setBanner("connection closed; press Connect to retry", true);
  };
  socket.onerror = () => {
    setBanner("connection failed; is `vizcompose serve` running?", true);
  };
}

connectButton.addEventListener("click", connect);

recordButton.addEventListener("click", () => {
  if (!recorder.enabled) {
    recorder.enabled = true;
    recorder.clear();
    recordButton.textContent = "Stop + download trace";
    return;
  }
  recorder.enabled = false;
  recordButton.textContent = "Record session";
  const blob = new Blob([recorder.toTraceJsonl()], { type: "application/jsonl" });
  const anchor = document.createElement("a");
  anchor.href = URL.createObjectURL(blob);
  anchor.download = `session.trace.jsonl`;
  anchor.click();
  URL.revokeObjectURL(anchor.href);
});

// pointer handling: left button drags views, right button orbits
let orbiting = false;
let lastPointer: [number, number] = [0, 0];

canvas.addEventListener("contextmenu", (e) => e.preventDefault());

canvas.addEventListener("pointerdown", (e) => {
  const [sx, sy] = eventXY(e);
  lastPointer = [sx, sy];
  if (e.button === 2) {
    orbiting = true;
    return;
  }
  const hit = hitTest(camera, model.views, tables, sx, sy);
  if (hit) {
    canvas.setPointerCapture(e.pointerId);
    gestures.pointerDown(hit);
  }
});

canvas.addEventListener("pointermove", (e) => {
  const [sx, sy] = eventXY(e);
  const dy = sy - lastPointer[1];
  const dx = sx - lastPointer[0];
  lastPointer = [sx, sy];
  if (orbiting) {
    camera.yaw -= dx * 0.008;
    camera.pitch = Math.min(1.4, Math.max(-0.2, camera.pitch + dy * 0.006));
    return;
  }
  gestures.pointerMove(sx, sy, e.shiftKey, dy);
});

window.addEventListener("pointerup", (e) => {
  if (e.button === 2) {
    orbiting = false;
    return;
  }
  gestures.pointerUp();
});

canvas.addEventListener("wheel", (e) => {
  e.preventDefault();
  camera.distance = Math.min(8, Math.max(1, camera.distance + e.deltaY * 0.002));
});

window.addEventListener("keydown", (e) => {
  if (e.key === "Tab") {
    e.preventDefault();
    handBadge.textContent = gestures.toggleHand();
  } else if (e.key === "Escape") {
    gestures.releaseAll();
  }
});

// steady tick stream keeps previews fresh while a session is live
setInterval(() => {
  if (loaded) gestures.tick();
}, 100);

function eventXY(e: PointerEvent): [number, number] {
  const rect = canvas.getBoundingClientRect();
  return [e.clientX - rect.left, e.clientY - rect.top];
}

function resize(): void {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
  camera.width = canvas.width;
  camera.height = canvas.height;
}

window.addEventListener("resize", resize);
resize();

function frame(): void {
  draw(ctx, camera, model, tables, gestures.holding());
  requestAnimationFrame(frame);
}

handBadge.textContent = gestures.activeHand;
frame();
