/**
 * Wire-protocol types, mirroring docs/protocol.md in the engine repository.
 *
 * The UI never recomputes geometry: a UiFrame is displayed verbatim, and
 * every field here is exactly what the engine sent.
 */

export interface FramePoints {
  id: number[];
  x: number[];
  y: number[];
  z: number[];
  color: number[];
  active: boolean[];
  member: boolean[];
}

export interface FrameLabel {
  dim: number;
  text: string;
  angle: number;
  display_angle: number;
  strength: number;
  font_pt: number;
  opacity: number;
  visible: boolean;
}

export interface StmLabel {
  dim: number;
  text: string;
  x: number;
  y: number;
  weight: number;
}

export interface StmLayout {
  positions: Record<string, [number, number]>;
  labels: StmLabel[];
  paths: number[][];
  names: Record<string, string>;
  thumb_size: number;
}

export interface UiFrame {
  points: FramePoints;
  labels: FrameLabel[];
  zoom: number;
  turnoff: boolean;
  stm: StmLayout | null;
  status: { optimizing: boolean };
}

export type RequestId = string | number;

export interface Request {
  op: string;
  id?: RequestId;
  [field: string]: unknown;
}

export interface OkResponse {
  ok: true;
  id?: RequestId;
  frame?: UiFrame;
  [field: string]: unknown;
}

export interface ErrorResponse {
  ok: false;
  id?: RequestId;
  error: { code: string; message: string };
}

export type Response = OkResponse | ErrorResponse;

export interface ProgressEvent {
  event: string;
  generation?: number;
  best_score?: number;
}

export type ServerMessage = Response | ProgressEvent;

export function isEvent(message: ServerMessage): message is ProgressEvent {
  return "event" in message;
}
