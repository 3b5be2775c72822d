// Wire types mirroring the service's message schemas (protocol v1).

export type Direction = "LEFT" | "NEUTRAL" | "RIGHT";
export type Phase = "AWAIT_JUDGMENT" | "ANIMATING" | "AUTO_ACTION" | "TRIAL_DONE";
export type Verdict = "OK" | "NG";

export interface IconView {
  position: number;
  direction: Direction;
  phase: Phase | null;
}

export interface ViewPayload {
  sentence_id: string | null;
  phrases: string[];
  stack: number[];
  queue: number[];
  arcs: [number, number][];
  icon: IconView;
  trial_order: number | null;
  trials_total: number;
  verdict: Verdict | null;
  session_complete: boolean;
  clock_ms: number | null;
}

export interface ViewMessage {
  v: number;
  seq: number;
  type: "view";
  view: ViewPayload;
}

export interface ActionCommittedMessage {
  v: number;
  seq: number;
  type: "action_committed";
  kind: string;
  judgment: "SHIFT" | "REDUCE" | null;
  response_ms: number | null;
  committed_at: number;
  auto: boolean;
}

export interface AnimatingMessage {
  v: number;
  seq: number;
  type: "animating";
  start_ms: number;
  until_ms: number;
  after: string;
}

export interface VerdictMessage {
  v: number;
  seq: number;
  type: "verdict";
  verdict: Verdict;
  trial_order: number;
}

export interface SessionDoneMessage {
  v: number;
  seq: number;
  type: "session_done";
  trials: number;
}

export interface ErrorMessage {
  v: number;
  seq: number;
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage =
  | ViewMessage
  | ActionCommittedMessage
  | AnimatingMessage
  | VerdictMessage
  | SessionDoneMessage
  | ErrorMessage;

const SERVER_TYPES = new Set([
  "view",
  "action_committed",
  "animating",
  "verdict",
  "session_done",
  "error",
]);

export class WireError extends Error {}

export function parseServerMessage(raw: string): ServerMessage {
  let data: unknown;
  try {
    data = JSON.parse(raw);
  } catch {
    throw new WireError(`unparseable server message: ${raw.slice(0, 80)}`);
  }
  const message = data as { type?: string; seq?: number };
  if (!message || typeof message.type !== "string" || !SERVER_TYPES.has(message.type)) {
    throw new WireError(`unknown server message type: ${String(message?.type)}`);
  }
  if (typeof message.seq !== "number") {
    throw new WireError("server message missing sequence number");
  }
  return data as ServerMessage;
}

export interface EngineConfigInfo {
  icon_speed: number;
  drift_speed: number;
  animation_ms: number;
  commit_mode: "hold" | "instant";
}

export interface CreateSessionResponse {
  session_id: string;
  subject_id: string;
  seed: number;
  plan: { sentence_id: string; block: string }[];
  engine: EngineConfigInfo;
  view: ViewPayload;
}

// Client -> server constructors; every gameplay message carries the
// client-monotonic timestamp it happened at.
export const messages = {
  hello(): string {
    return JSON.stringify({ type: "hello", protocol: 1 });
  },
  inputEvent(tMs: number, direction: Direction): string {
    return JSON.stringify({ type: "input_event", t_ms: tMs, direction });
  },
  jump(tMs: number): string {
    return JSON.stringify({ type: "jump", t_ms: tMs });
  },
  tick(tMs: number): string {
    return JSON.stringify({ type: "tick", t_ms: tMs });
  },
  resume(): string {
    return JSON.stringify({ type: "resume" });
  },
};
