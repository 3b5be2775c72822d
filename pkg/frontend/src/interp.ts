// Client-side icon smoothing between authoritative server views.
// Pure prediction only - the server decides every commit; the client just
// draws where the icon plausibly is at render time.

import type { Direction, Phase } from "./wire.js";

export interface IconPrediction {
  serverPosition: number;
  phase: Phase | null;
  direction: Direction;
  serverClockMs: number; // clock_ms of the view this came from
  iconSpeed: number; // full ranges per second
  driftSpeed: number;
  animationMs: number;
}

function sign(direction: Direction): number {
  return direction === "LEFT" ? -1 : direction === "RIGHT" ? 1 : 0;
}

export function predictPosition(p: IconPrediction, nowMs: number): number {
  const dt = Math.max(0, nowMs - p.serverClockMs);
  if (p.phase === "AWAIT_JUDGMENT") {
    const d = sign(p.direction);
    let position: number;
    if (d !== 0) {
      position = p.serverPosition + (p.iconSpeed / 1000) * dt * d;
    } else if (p.serverPosition > 0) {
      position = Math.max(0, p.serverPosition - (p.driftSpeed / 1000) * dt);
    } else {
      position = Math.min(0, p.serverPosition + (p.driftSpeed / 1000) * dt);
    }
    return Math.max(-1, Math.min(1, position));
  }
  if (p.phase === "ANIMATING") {
    // Recentring: slide linearly back to the middle over one window.
    const remaining = Math.max(0, 1 - dt / p.animationMs);
    return p.serverPosition * remaining;
  }
  return p.serverPosition;
}
