// Bootstraps a session against the service on the same origin, binds
// keyboard and gamepad input, and runs the render loop.  All timing sent
// to the server uses this page's monotonic clock.
import { GameClient } from "./client.js";
import { bindKeyboard, GamepadTracker } from "./input.js";
import { predictPosition } from "./interp.js";
import { findScreen, render } from "./render.js";
const TICK_INTERVAL_MS = 50;
async function createSession() {
    const params = new URLSearchParams(location.search);
    const body = {
        subject_id: params.get("subject") ?? `player-${Date.now() % 100000}`,
        seed: params.get("seed") ? Number(params.get("seed")) : null,
        practice: params.get("practice") === "1",
        agent: "web-ui",
        start_ms: performance.now(),
    };
    const response = await fetch("/sessions", {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
    });
    if (!response.ok)
        throw new Error(`create session failed: ${response.status}`);
    return (await response.json());
}
async function start() {
    const session = await createSession();
    const screen = findScreen(document);
    const engine = session.engine;
    let held = "NEUTRAL";
    let lastViewAt = performance.now();
    const scheme = location.protocol === "https:" ? "wss" : "ws";
    const client = new GameClient(`${scheme}://${location.host}/sessions/${session.session_id}/ws`, {
        onView: () => {
            lastViewAt = performance.now();
        },
        onClose: () => {
            setTimeout(() => client.connect().then(() => client.resume()), 500);
        },
    }, (url) => new WebSocket(url));
    await client.connect();
    client.resume();
    const sink = {
        onDirection(tMs, direction) {
            held = direction;
            client.sendDirection(tMs, direction);
        },
        onJump(tMs) {
            client.sendJump(tMs);
        },
    };
    bindKeyboard(window, sink, () => performance.now());
    const gamepad = new GamepadTracker(sink, () => performance.now());
    let lastTick = 0;
    const frame = () => {
        const now = performance.now();
        gamepad.poll(navigator.getGamepads ? navigator.getGamepads()[0] : null);
        if (now - lastTick >= TICK_INTERVAL_MS) {
            lastTick = now;
            client.sendTick(now);
        }
        const view = client.view ?? session.view;
        const predicted = predictPosition({
            serverPosition: view.icon.position,
            phase: view.icon.phase,
            direction: held,
            serverClockMs: view.clock_ms ?? 0,
            iconSpeed: engine.icon_speed,
            driftSpeed: engine.drift_speed,
            animationMs: engine.animation_ms,
        }, 
        // Predict forward from when the view arrived, in view-clock terms.
        (view.clock_ms ?? 0) + (now - lastViewAt));
        render(screen, view, predicted);
        requestAnimationFrame(frame);
    };
    requestAnimationFrame(frame);
}
start().catch((error) => {
    const verdict = document.getElementById("verdict");
    if (verdict) {
        verdict.textContent = String(error);
        verdict.className = "verdict ng";
    }
});
//# sourceMappingURL=main.js.map