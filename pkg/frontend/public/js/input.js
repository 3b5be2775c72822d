// Device input -> direction/jump events with monotonic timestamps.
// Left arrow leans toward the SHIFT wall, right arrow toward REDUCE;
// a gamepad's horizontal axis maps through a +-0.3 dead zone to the same
// three states, so commit dynamics match across devices.
export const AXIS_THRESHOLD = 0.3;
export function axisToDirection(value, threshold = AXIS_THRESHOLD) {
    if (value <= -threshold)
        return "LEFT";
    if (value >= threshold)
        return "RIGHT";
    return "NEUTRAL";
}
// Keyboard is binary full deflection; both arrows held cancel out.
export function keysToDirection(leftDown, rightDown) {
    if (leftDown && !rightDown)
        return "LEFT";
    if (rightDown && !leftDown)
        return "RIGHT";
    return "NEUTRAL";
}
// Tracks arrow/space state and forwards deduplicated transitions.
// The clock is injected so tests can drive it deterministically.
export class KeyboardTracker {
    constructor(sink, clock) {
        this.sink = sink;
        this.clock = clock;
        this.leftDown = false;
        this.rightDown = false;
        this.last = "NEUTRAL";
    }
    keydown(event) {
        if (event.repeat)
            return;
        if (event.code === "ArrowLeft")
            this.leftDown = true;
        else if (event.code === "ArrowRight")
            this.rightDown = true;
        else if (event.code === "Space") {
            this.sink.onJump(this.clock());
            return;
        }
        else
            return;
        this.emit();
    }
    keyup(event) {
        if (event.code === "ArrowLeft")
            this.leftDown = false;
        else if (event.code === "ArrowRight")
            this.rightDown = false;
        else
            return;
        this.emit();
    }
    emit() {
        const direction = keysToDirection(this.leftDown, this.rightDown);
        if (direction !== this.last) {
            this.last = direction;
            this.sink.onDirection(this.clock(), direction);
        }
    }
}
// Polled each animation frame; emits only on state transitions.
// No gamepad attached simply means no events - keyboard still works.
export class GamepadTracker {
    constructor(sink, clock, jumpButton = 0) {
        this.sink = sink;
        this.clock = clock;
        this.jumpButton = jumpButton;
        this.last = "NEUTRAL";
        this.jumpHeld = false;
    }
    poll(pad) {
        if (!pad)
            return;
        const direction = axisToDirection(pad.axes[0] ?? 0);
        if (direction !== this.last) {
            this.last = direction;
            this.sink.onDirection(this.clock(), direction);
        }
        const pressed = pad.buttons[this.jumpButton]?.pressed ?? false;
        if (pressed && !this.jumpHeld)
            this.sink.onJump(this.clock());
        this.jumpHeld = pressed;
    }
}
export function bindKeyboard(target, sink, clock) {
    const tracker = new KeyboardTracker(sink, clock);
    target.addEventListener("keydown", (e) => tracker.keydown(e));
    target.addEventListener("keyup", (e) => tracker.keyup(e));
    return tracker;
}
//# sourceMappingURL=input.js.map