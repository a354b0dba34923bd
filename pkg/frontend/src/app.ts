/**
 * Browser entry point: wires the canvas, gesture mapper, and protocol
 * client together. Expects a WebSocket-to-TCP bridge in front of the
 * engine's line protocol (ws://host/... forwarding to the engine port).
 */

import { ProtocolClient, RequestPump } from "./client.js";
import { Request, UiFrame } from "./frame.js";
import { Button, GestureMapper } from "./gestures.js";
import { diskTransform, renderFrame, stmFromPixels } from "./render.js";
import { WebSocketTransport } from "./transport.js";

export interface AppOptions {
  canvas: HTMLCanvasElement;
  socketUrl: string;
  statusLine?: HTMLElement;
}

const BUTTONS: Record<number, Button> = { 0: "left", 1: "middle", 2: "right" };

export class App {
  private frame: UiFrame | null = null;
  private readonly client: ProtocolClient;
  private readonly pump: RequestPump;
  private readonly mapper: GestureMapper;

  constructor(private readonly options: AppOptions) {
    const transport = new WebSocketTransport(new WebSocket(options.socketUrl));
    this.client = new ProtocolClient(transport, (event) => {
      if (options.statusLine && event.event === "optimize_progress") {
        options.statusLine.textContent =
          `generation ${event.generation}: best ${event.best_score?.toFixed(4)}`;
      }
    });
    this.pump = new RequestPump(this.client, {
      onFrame: (frame) => this.showFrame(frame),
      onError: (response) => {
        if (options.statusLine && !response.ok) {
          options.statusLine.textContent = `${response.error.code}: ${response.error.message}`;
        }
      },
    });
    this.mapper = new GestureMapper((request) => this.pump.submit(request), {
      emitMove: (request) => this.pump.submit(request, true),
    });
    this.bindPointerEvents();
  }

  request(request: Request): void {
    this.pump.submit(request);
  }

  private showFrame(frame: UiFrame): void {
    this.frame = frame;
    this.mapper.setFrame(frame);
    const ctx = this.options.canvas.getContext("2d");
    if (ctx !== null) {
      renderFrame(ctx, frame, {
        width: this.options.canvas.width,
        height: this.options.canvas.height,
      });
    }
  }

  /** Pixel position -> trackball-disk coordinates ([-1, 1]^2, rim at 1). */
  private toDisk(px: number, py: number): [number, number] {
    const { canvas } = this.options;
    if (this.frame === null) {
      return [0, 0];
    }
    const transform = diskTransform(this.frame, {
      width: canvas.width,
      height: canvas.height,
    });
    const [cx, cy] = transform(0, 0);
    const [ex] = transform(1, 0);
    const radiusPx = (ex - cx) * 1.0; // data unit per radius = 1
    return [(px - cx) / radiusPx, (cy - py) / radiusPx];
  }

  private bindPointerEvents(): void {
    const canvas = this.options.canvas;
    canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());
    canvas.addEventListener("pointerdown", (ev) => {
      const [x, y] = this.toDisk(ev.offsetX, ev.offsetY);
      this.mapper.pointerDown({ x, y, button: BUTTONS[ev.button] ?? "left", ctrl: ev.ctrlKey });
    });
    canvas.addEventListener("pointermove", (ev) => {
      if (ev.buttons === 0) {
        return;
      }
      const [x, y] = this.toDisk(ev.offsetX, ev.offsetY);
      this.mapper.pointerMove({ x, y, button: BUTTONS[ev.button] ?? "left" });
    });
    canvas.addEventListener("pointerup", (ev) => {
      const [x, y] = this.toDisk(ev.offsetX, ev.offsetY);
      this.mapper.pointerUp({ x, y, button: BUTTONS[ev.button] ?? "left" });
    });
    canvas.addEventListener("dblclick", (ev) => {
      if (this.frame === null) {
        return;
      }
      const pos = stmFromPixels(
        this.frame,
        { width: canvas.width, height: canvas.height },
        ev.offsetX,
        ev.offsetY,
      );
      if (pos !== null) {
        this.mapper.stmDoubleClick(pos[0], pos[1]);
      }
    });
    window.addEventListener("keyup", (ev) => {
      this.mapper.keyRelease(ev.key, ev.ctrlKey);
    });
  }
}
