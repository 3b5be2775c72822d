// Device input -> direction/jump events with monotonic timestamps.
// Left arrow leans toward the SHIFT wall, right arrow toward REDUCE;
// a gamepad's horizontal axis maps through a +-0.3 dead zone to the same
// three states, so commit dynamics match across devices.

import type { Direction } from "./wire.js";

export const AXIS_THRESHOLD = 0.3;

export function axisToDirection(value: number, threshold = AXIS_THRESHOLD): Direction {
  if (value <= -threshold) return "LEFT";
  if (value >= threshold) return "RIGHT";
  return "NEUTRAL";
}

// Keyboard is binary full deflection; both arrows held cancel out.
export function keysToDirection(leftDown: boolean, rightDown: boolean): Direction {
  if (leftDown && !rightDown) return "LEFT";
  if (rightDown && !leftDown) return "RIGHT";
  return "NEUTRAL";
}

export interface InputSink {
  onDirection(tMs: number, direction: Direction): void;
  onJump(tMs: number): void;
}

interface KeyEventLike {
  code: string;
  repeat?: boolean;
}

// Tracks arrow/space state and forwards deduplicated transitions.
// The clock is injected so tests can drive it deterministically.
export class KeyboardTracker {
  private leftDown = false;
  private rightDown = false;
  private last: Direction = "NEUTRAL";

  constructor(private sink: InputSink, private clock: () => number) {}

  keydown(event: KeyEventLike): void {
    if (event.repeat) return;
    if (event.code === "ArrowLeft") this.leftDown = true;
    else if (event.code === "ArrowRight") this.rightDown = true;
    else if (event.code === "Space") {
      this.sink.onJump(this.clock());
      return;
    } else return;
    this.emit();
  }

  keyup(event: KeyEventLike): void {
    if (event.code === "ArrowLeft") this.leftDown = false;
    else if (event.code === "ArrowRight") this.rightDown = false;
    else return;
    this.emit();
  }

  private emit(): void {
    const direction = keysToDirection(this.leftDown, this.rightDown);
    if (direction !== this.last) {
      this.last = direction;
      this.sink.onDirection(this.clock(), direction);
    }
  }
}

interface GamepadLike {
  axes: ReadonlyArray<number>;
  buttons: ReadonlyArray<{ pressed: boolean }>;
}

// Polled each animation frame; emits only on state transitions.
// No gamepad attached simply means no events - keyboard still works.
export class GamepadTracker {
  private last: Direction = "NEUTRAL";
  private jumpHeld = false;

  constructor(
    private sink: InputSink,
    private clock: () => number,
    private jumpButton = 0,
  ) {}

  poll(pad: GamepadLike | null | undefined): void {
    if (!pad) return;
    const direction = axisToDirection(pad.axes[0] ?? 0);
    if (direction !== this.last) {
      this.last = direction;
      this.sink.onDirection(this.clock(), direction);
    }
    const pressed = pad.buttons[this.jumpButton]?.pressed ?? false;
    if (pressed && !this.jumpHeld) this.sink.onJump(this.clock());
    this.jumpHeld = pressed;
  }
}

export function bindKeyboard(
  target: { addEventListener(type: string, fn: (e: KeyboardEvent) => void): void },
  sink: InputSink,
  clock: () => number,
): KeyboardTracker {
  const tracker = new KeyboardTracker(sink, clock);
  target.addEventListener("keydown", (e) => tracker.keydown(e));
  target.addEventListener("keyup", (e) => tracker.keyup(e));
  return tracker;
}
