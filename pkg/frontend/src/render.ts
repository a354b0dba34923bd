/**
 * Canvas rendering of engine frames: the trackball disk with its point
 * cloud and boundary labels, plus the trail-map panel when views exist.
 *
 * Rendering is a pure function of (frame, options): identical inputs draw
 * identical command streams, which the tests snapshot through a recording
 * context. Only the fixed data-to-pixel transform lives here; no geometry
 * is recomputed.
 */

import { UiFrame } from "./frame.js";

/** The subset of CanvasRenderingContext2D the renderer uses. */
export interface Canvas2D {
  fillStyle: string | CanvasGradient | CanvasPattern;
  strokeStyle: string | CanvasGradient | CanvasPattern;
  globalAlpha: number;
  lineWidth: number;
  font: string;
  textAlign: string;
  textBaseline: string;
  clearRect(x: number, y: number, w: number, h: number): void;
  fillRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  closePath(): void;
  fill(): void;
  stroke(): void;
  clip(): void;
  save(): void;
  restore(): void;
  fillText(text: string, x: number, y: number): void;
}

export interface RenderOptions {
  width: number;
  height: number;
  /** Disk radius as a fraction of the shorter SE panel side. */
  diskRadiusFraction?: number;
  /** Data units mapped onto one disk radius. */
  dataUnitsPerRadius?: number;
  pointRadius?: number;
  palette?: string[];
}

export const DEFAULT_PALETTE = [
  "#4878cf", // 0: neutral
  "#d65f5f",
  "#6acc65",
  "#c554c5",
  "#ee9944",
  "#77bedb",
  "#ccb974",
];

const DISK_EDGE = "#444444";
const BACKGROUND = "#ffffff";

interface Layout {
  cx: number;
  cy: number;
  radius: number;
  scale: number;
  stmX: number;
  stmW: number;
}

function layoutPanels(frame: UiFrame, opts: Required<RenderOptions>): Layout {
  const hasStm = frame.stm !== null;
  const seWidth = hasStm ? opts.width * 0.62 : opts.width;
  const radius = opts.diskRadiusFraction * Math.min(seWidth, opts.height);
  return {
    cx: seWidth / 2,
    cy: opts.height / 2,
    radius,
    scale: radius / opts.dataUnitsPerRadius,
    stmX: seWidth,
    stmW: opts.width - seWidth,
  };
}

function withDefaults(options: RenderOptions): Required<RenderOptions> {
  return {
    diskRadiusFraction: 0.42,
    dataUnitsPerRadius: 1.0,
    pointRadius: 2.5,
    palette: DEFAULT_PALETTE,
    ...options,
  };
}

/** Pixel position of a data-space point inside the SE disk. */
export function diskTransform(
  frame: UiFrame,
  options: RenderOptions,
): (x: number, y: number) => [number, number] {
  const opts = withDefaults(options);
  const { cx, cy, scale } = layoutPanels(frame, opts);
  return (x, y) => [cx + x * scale, cy - y * scale];
}

/** Map a pixel into the trail-map panel's unit square; null when outside. */
export function stmFromPixels(
  frame: UiFrame,
  options: RenderOptions,
  px: number,
  py: number,
): [number, number] | null {
  if (frame.stm === null) {
    return null;
  }
  const opts = withDefaults(options);
  const { stmX, stmW } = layoutPanels(frame, opts);
  const pad = 10;
  const side = Math.min(stmW - 2 * pad, opts.height - 2 * pad);
  const originX = stmX + pad;
  const originY = (opts.height - side) / 2;
  const x = (px - originX) / side;
  const y = 1 - (py - originY) / side;
  if (x < 0 || x > 1 || y < 0 || y > 1) {
    return null;
  }
  return [x, y];
}

export function renderFrame(ctx: Canvas2D, frame: UiFrame, options: RenderOptions): void {
  const opts = withDefaults(options);
  const layout = layoutPanels(frame, opts);

  ctx.fillStyle = BACKGROUND;
  ctx.clearRect(0, 0, opts.width, opts.height);
  ctx.fillRect(0, 0, opts.width, opts.height);

  drawDisk(ctx, frame, opts, layout);
  drawLabels(ctx, frame, opts, layout);
  if (frame.stm !== null) {
    drawTrailMap(ctx, frame, opts, layout);
  }
  if (frame.status.optimizing) {
    ctx.globalAlpha = 1;
    ctx.fillStyle = "#222222";
    ctx.font = "12px sans-serif";
    ctx.textAlign = "left";
    ctx.textBaseline = "top";
    ctx.fillText("optimizing…", 8, 8);
  }
}

function drawDisk(
  ctx: Canvas2D,
  frame: UiFrame,
  opts: Required<RenderOptions>,
  layout: Layout,
): void {
  const { cx, cy, radius, scale } = layout;
  ctx.globalAlpha = 1;
  ctx.strokeStyle = DISK_EDGE;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  ctx.arc(cx, cy, radius, 0, 2 * Math.PI);
  ctx.stroke();

  // scatter, clipped to the disk
  ctx.save();
  ctx.beginPath();
  ctx.arc(cx, cy, radius, 0, 2 * Math.PI);
  ctx.clip();
  const points = frame.points;
  for (let i = 0; i < points.id.length; i++) {
    if (!points.active[i]) {
      continue; // deactivated points are invisible
    }
    if (frame.turnoff && !points.member[i]) {
      continue; // membership filter: show only points of this subspace
    }
    const px = cx + points.x[i] * scale;
    const py = cy - points.y[i] * scale;
    const color = opts.palette[points.color[i] % opts.palette.length];
    ctx.fillStyle = color;
    ctx.globalAlpha = 0.85;
    ctx.beginPath();
    ctx.arc(px, py, opts.pointRadius, 0, 2 * Math.PI);
    ctx.fill();
  }
  ctx.restore();
}

function drawLabels(
  ctx: Canvas2D,
  frame: UiFrame,
  opts: Required<RenderOptions>,
  layout: Layout,
): void {
  const { cx, cy, radius } = layout;
  const ring = radius + 16;
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const label of frame.labels) {
    if (!label.visible) {
      continue;
    }
    const theta = (label.display_angle * Math.PI) / 180;
    const lx = cx + ring * Math.cos(theta);
    const ly = cy - ring * Math.sin(theta);
    ctx.globalAlpha = label.opacity;
    ctx.fillStyle = "#111111";
    ctx.font = `${label.font_pt.toFixed(1)}px sans-serif`;
    ctx.fillText(label.text, lx, ly);
  }
  ctx.globalAlpha = 1;
}

function drawTrailMap(
  ctx: Canvas2D,
  frame: UiFrame,
  opts: Required<RenderOptions>,
  layout: Layout,
): void {
  const stm = frame.stm!;
  const { stmX, stmW } = layout;
  const pad = 10;
  const side = Math.min(stmW - 2 * pad, opts.height - 2 * pad);
  const originX = stmX + pad;
  const originY = (opts.height - side) / 2;
  const toPx = (x: number, y: number): [number, number] => [
    originX + x * side,
    originY + (1 - y) * side,
  ];

  ctx.globalAlpha = 1;
  ctx.strokeStyle = "#999999";
  ctx.lineWidth = 1;
  ctx.beginPath();
  ctx.moveTo(originX, originY);
  ctx.lineTo(originX + side, originY);
  ctx.lineTo(originX + side, originY + side);
  ctx.lineTo(originX, originY + side);
  ctx.closePath();
  ctx.stroke();

  // word cloud behind the thumbnails
  ctx.textAlign = "center";
  ctx.textBaseline = "middle";
  for (const label of stm.labels) {
    const [lx, ly] = toPx(label.x, label.y);
    ctx.globalAlpha = 0.25 + 0.75 * label.weight;
    ctx.fillStyle = "#666666";
    ctx.font = `${(8 + 8 * label.weight).toFixed(1)}px sans-serif`;
    ctx.fillText(label.text, lx, ly);
  }

  // keyframe paths
  ctx.globalAlpha = 1;
  ctx.strokeStyle = "#cc8800";
  for (const path of stm.paths) {
    ctx.beginPath();
    path.forEach((viewId, index) => {
      const pos = stm.positions[String(viewId)];
      if (pos === undefined) {
        return;
      }
      const [px, py] = toPx(pos[0], pos[1]);
      if (index === 0) {
        ctx.moveTo(px, py);
      } else {
        ctx.lineTo(px, py);
      }
    });
    ctx.stroke();
  }

  // view thumbnails as circles, mimicking the trackball's shape
  const thumbRadius = stm.thumb_size * side;
  for (const viewId of Object.keys(stm.positions).sort()) {
    const [px, py] = toPx(stm.positions[viewId][0], stm.positions[viewId][1]);
    ctx.fillStyle = "#f5f5f5";
    ctx.strokeStyle = DISK_EDGE;
    ctx.beginPath();
    ctx.arc(px, py, thumbRadius, 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
    ctx.fillStyle = "#333333";
    ctx.font = "9px sans-serif";
    ctx.fillText(stm.names[viewId] ?? viewId, px, py + thumbRadius + 8);
  }
}
