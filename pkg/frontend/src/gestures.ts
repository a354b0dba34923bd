/**
 * Maps pointer/widget events to protocol requests.
 *
 * Coordinates arriving here are already in trackball-disk units ([-1, 1]^2,
 * the disk rim at radius 1); the host view converts pixels before calling.
 * Every gesture produces at most one request; hit-testing uses the last
 * engine frame verbatim and never mutates geometry.
 */

import { Request, UiFrame } from "./frame.js";

export type Button = "left" | "middle" | "right";

export interface PointerEventLike {
  x: number;
  y: number;
  button: Button;
  ctrl?: boolean;
}

export interface GestureOptions {
  /** Angular half-width of a boundary label hit-target, degrees. */
  labelHitDegrees?: number;
  /** Radial band of the label ring, in disk units. */
  labelRingInner?: number;
  labelRingOuter?: number;
  /** Coalescable drag submission (intermediate moves may be merged). */
  emitMove?: (request: Request) => void;
}

const DEFAULTS = { labelHitDegrees: 7, labelRingInner: 0.85, labelRingOuter: 1.3 };

export class GestureMapper {
  private frame: UiFrame | null = null;
  private drag: { button: Button; last: [number, number]; pinned: number | null } | null = null;
  private readonly selection = new Set<number>();
  private palette: number | "gray" = 1;
  private readonly opts: Required<Omit<GestureOptions, "emitMove">>;
  private readonly emitMove: (request: Request) => void;

  constructor(
    private readonly emit: (request: Request) => void,
    options: GestureOptions = {},
  ) {
    this.opts = { ...DEFAULTS, ...options };
    this.emitMove = options.emitMove ?? emit;
  }

  /** Install the latest engine frame (hit-testing source of truth). */
  setFrame(frame: UiFrame): void {
    this.frame = frame;
  }

  selectedDims(): number[] {
    return [...this.selection].sort((a, b) => a - b);
  }

  /** The visible label whose periphery slot contains the point, if any. */
  labelAt(x: number, y: number): number | null {
    if (this.frame === null) {
      return null;
    }
    const radius = Math.hypot(x, y);
    if (radius < this.opts.labelRingInner || radius > this.opts.labelRingOuter) {
      return null;
    }
    const angle = ((Math.atan2(y, x) * 180) / Math.PI + 360) % 360;
    let best: number | null = null;
    let bestGap = this.opts.labelHitDegrees;
    for (const label of this.frame.labels) {
      if (!label.visible) {
        continue;
      }
      const raw = Math.abs(angle - label.display_angle) % 360;
      const gap = Math.min(raw, 360 - raw);
      if (gap <= bestGap) {
        bestGap = gap;
        best = label.dim;
      }
    }
    return best;
  }

  pointerDown(ev: PointerEventLike): void {
    const hit = this.labelAt(ev.x, ev.y);
    if (ev.ctrl) {
      // ctrl-click on a label toggles its membership in the selection;
      // purely local state, no request
      if (hit !== null) {
        if (this.selection.has(hit)) {
          this.selection.delete(hit);
        } else {
          this.selection.add(hit);
        }
      }
      return;
    }
    this.drag = {
      button: ev.button,
      last: [ev.x, ev.y],
      pinned: ev.button === "right" ? hit : null,
    };
  }

  pointerMove(ev: PointerEventLike): void {
    if (this.drag === null) {
      return;
    }
    this.emitDragStep([ev.x, ev.y], true);
  }

  pointerUp(ev: PointerEventLike): void {
    if (this.drag === null) {
      return;
    }
    this.emitDragStep([ev.x, ev.y], false); // gesture endpoint: never dropped
    this.drag = null;
  }

  private emitDragStep(to: [number, number], coalescable: boolean): void {
    const drag = this.drag!;
    const [fx, fy] = drag.last;
    if (fx === to[0] && fy === to[1]) {
      return; // zero-length motion maps to no request
    }
    drag.last = to;
    let request: Request;
    if (drag.button === "middle") {
      // vertical component re-weights the depth axis
      request = { op: "deep", amount: to[1] - fy };
    } else {
      request = {
        op: "drag",
        button: drag.button,
        from: [fx, fy],
        to: [to[0], to[1]],
      };
      if (drag.button === "right" && drag.pinned !== null) {
        request.pinned_dim = drag.pinned;
      }
    }
    if (coalescable) {
      this.emitMove(request);
    } else {
      this.emit(request);
    }
  }

  /** Releasing space with ctrl held equalizes the selected dimensions. */
  keyRelease(key: string, ctrl: boolean): void {
    if (key !== " " && key !== "Space") {
      return;
    }
    if (!ctrl || this.selection.size < 2) {
      return;
    }
    this.emit({ op: "equal_express", dims: this.selectedDims() });
    this.selection.clear();
  }

  /** Palette choice for subsequent lassos; "gray" deactivates. */
  selectPalette(entry: number | "gray"): void {
    this.palette = entry;
  }

  /**
   * Close a lasso drawn in frame coordinates; brushes the enclosed points.
   * Uses the last frame's projected positions for hit-testing only.
   */
  lasso(polygon: Array<[number, number]>): void {
    if (this.frame === null || polygon.length < 3) {
      return;
    }
    const points = this.frame.points;
    const ids: number[] = [];
    for (let i = 0; i < points.id.length; i++) {
      if (pointInPolygon(points.x[i], points.y[i], polygon)) {
        ids.push(points.id[i]);
      }
    }
    if (ids.length === 0) {
      return;
    }
    if (this.palette === "gray") {
      this.emit({ op: "brush", ids, action: "deactivate" });
    } else {
      this.emit({ op: "brush", ids, action: "color", color: this.palette });
    }
  }

  /** Double-clicking a trail-map thumbnail restores that view. */
  stmDoubleClick(x: number, y: number): void {
    if (this.frame === null || this.frame.stm === null) {
      return;
    }
    const stm = this.frame.stm;
    const radius = stm.thumb_size;
    for (const [viewId, [px, py]] of Object.entries(stm.positions)) {
      if (Math.hypot(x - px, y - py) <= radius) {
        this.emit({ op: "restore_view", id: Number(viewId) });
        return;
      }
    }
  }

  /** The traverse slider maps directly to the path parameter. */
  sliderChanged(t: number): void {
    this.emit({ op: "path_t", t });
  }

  nextClicked(): void {
    this.emit({ op: "path_next" });
  }
}

function pointInPolygon(x: number, y: number, polygon: Array<[number, number]>): boolean {
  let inside = false;
  for (let i = 0, j = polygon.length - 1; i < polygon.length; j = i++) {
    const [xi, yi] = polygon[i];
    const [xj, yj] = polygon[j];
    const crosses = yi > y !== yj > y && x < ((xj - xi) * (y - yi)) / (yj - yi) + xi;
    if (crosses) {
      inside = !inside;
    }
  }
  return inside;
}
