// Wire types mirroring the service's message schemas (protocol v1).
const SERVER_TYPES = new Set([
    "view",
    "action_committed",
    "animating",
    "verdict",
    "session_done",
    "error",
]);
export class WireError extends Error {
}
export function parseServerMessage(raw) {
    let data;
    try {
        data = JSON.parse(raw);
    }
    catch {
        throw new WireError(`unparseable server message: ${raw.slice(0, 80)}`);
    }
    const message = data;
    if (!message || typeof message.type !== "string" || !SERVER_TYPES.has(message.type)) {
        throw new WireError(`unknown server message type: ${String(message?.type)}`);
    }
    if (typeof message.seq !== "number") {
        throw new WireError("server message missing sequence number");
    }
    return data;
}
// Client -> server constructors; every gameplay message carries the
// client-monotonic timestamp it happened at.
export const messages = {
    hello() {
        return JSON.stringify({ type: "hello", protocol: 1 });
    },
    inputEvent(tMs, direction) {
        return JSON.stringify({ type: "input_event", t_ms: tMs, direction });
    },
    jump(tMs) {
        return JSON.stringify({ type: "jump", t_ms: tMs });
    },
    tick(tMs) {
        return JSON.stringify({ type: "tick", t_ms: tMs });
    },
    resume() {
        return JSON.stringify({ type: "resume" });
    },
};
//# sourceMappingURL=wire.js.map