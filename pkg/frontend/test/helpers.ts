/** Test doubles: a scripted transport and a recording canvas context. */

import { Request, Response, ServerMessage, UiFrame } from "../src/frame.js";
import { Transport } from "../src/transport.js";
import { Canvas2D } from "../src/render.js";

/** In-memory transport whose responses are produced by a handler. */
export class FakeTransport implements Transport {
  private handler: (line: string) => void = () => {};
  readonly requests: Request[] = [];
  /** Queue of message batches to deliver per request (events + response). */
  respond: (request: Request) => ServerMessage[] = (request) => [
    { ok: true, id: request.id },
  ];
  /** When true, responses wait until flush() is called. */
  manual = false;
  private held: ServerMessage[][] = [];

  send(line: string): void {
    const request = JSON.parse(line) as Request;
    this.requests.push(request);
    const batch = this.respond(request);
    if (this.manual) {
      this.held.push(batch);
    } else {
      this.deliver(batch);
    }
  }

  /** Deliver the oldest held response batch. */
  flushOne(): void {
    const batch = this.held.shift();
    if (batch !== undefined) {
      this.deliver(batch);
    }
  }

  heldCount(): number {
    return this.held.length;
  }

  private deliver(batch: ServerMessage[]): void {
    for (const message of batch) {
      this.handler(JSON.stringify(message));
    }
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  close(): void {}
}

export type DrawCall = Array<string | number>;

/** Canvas context that records every call and property set. */
export class RecordingContext implements Canvas2D {
  readonly calls: DrawCall[] = [];

  private record(name: string, ...args: Array<string | number>): void {
    this.calls.push([name, ...args.map((a) => (typeof a === "number" ? round(a) : a))]);
  }

  set fillStyle(value: string | CanvasGradient | CanvasPattern) {
    this.record("fillStyle", String(value));
  }

  set strokeStyle(value: string | CanvasGradient | CanvasPattern) {
    this.record("strokeStyle", String(value));
  }

  set globalAlpha(value: number) {
    this.record("globalAlpha", round(value));
  }

  set lineWidth(value: number) {
    this.record("lineWidth", round(value));
  }

  set font(value: string) {
    this.record("font", value);
  }

  set textAlign(value: string) {
    this.record("textAlign", value);
  }

  set textBaseline(value: string) {
    this.record("textBaseline", value);
  }

  clearRect(x: number, y: number, w: number, h: number): void {
    this.record("clearRect", x, y, w, h);
  }

  fillRect(x: number, y: number, w: number, h: number): void {
    this.record("fillRect", x, y, w, h);
  }

  beginPath(): void {
    this.record("beginPath");
  }

  arc(x: number, y: number, r: number, a0: number, a1: number): void {
    this.record("arc", x, y, r, a0, a1);
  }

  moveTo(x: number, y: number): void {
    this.record("moveTo", x, y);
  }

  lineTo(x: number, y: number): void {
    this.record("lineTo", x, y);
  }

  closePath(): void {
    this.record("closePath");
  }

  fill(): void {
    this.record("fill");
  }

  stroke(): void {
    this.record("stroke");
  }

  clip(): void {
    this.record("clip");
  }

  save(): void {
    this.record("save");
  }

  restore(): void {
    this.record("restore");
  }

  fillText(text: string, x: number, y: number): void {
    this.record("fillText", text, x, y);
  }
}

/** Quantize pixel coordinates so snapshots are stable across platforms. */
function round(value: number): number {
  return Math.round(value * 1000) / 1000;
}

export function emptyFrame(): UiFrame {
  return {
    points: { id: [], x: [], y: [], z: [], color: [], active: [], member: [] },
    labels: [],
    zoom: 1,
    turnoff: false,
    stm: null,
    status: { optimizing: false },
  };
}

export function frameWithPoints(
  xs: number[],
  ys: number[],
  overrides: Partial<UiFrame> = {},
): UiFrame {
  const n = xs.length;
  return {
    points: {
      id: [...Array(n).keys()],
      x: xs,
      y: ys,
      z: new Array(n).fill(0),
      color: new Array(n).fill(0),
      active: new Array(n).fill(true),
      member: new Array(n).fill(true),
    },
    labels: [],
    zoom: 1,
    turnoff: false,
    stm: null,
    status: { optimizing: false },
    ...overrides,
  };
}

export function okWithFrame(frame: UiFrame): Response {
  return { ok: true, frame };
}
