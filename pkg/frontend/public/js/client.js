// WebSocket game client: transport and view bookkeeping, zero game rules.
// Reloading the page and resuming always converges to the server's state.
import { messages, parseServerMessage, } from "./wire.js";
export class GameClient {
    constructor(url, handlers, factory) {
        this.url = url;
        this.handlers = handlers;
        this.factory = factory;
        this.view = null;
        this.lastSeq = 0;
        this.socket = null;
    }
    connect() {
        return new Promise((resolve) => {
            const socket = this.factory(this.url);
            this.socket = socket;
            socket.addEventListener("open", () => {
                socket.send(messages.hello());
                this.handlers.onOpen?.();
                resolve();
            });
            socket.addEventListener("message", (event) => {
                const message = parseServerMessage(String(event.data));
                this.lastSeq = message.seq;
                if (message.type === "view") {
                    this.view = message.view;
                    this.handlers.onView?.(message.view);
                }
                this.handlers.onMessage?.(message);
            });
            socket.addEventListener("close", () => {
                this.socket = null;
                this.handlers.onClose?.();
            });
        });
    }
    send(payload) {
        this.socket?.send(payload);
    }
    sendDirection(tMs, direction) {
        this.send(messages.inputEvent(tMs, direction));
    }
    sendJump(tMs) {
        this.send(messages.jump(tMs));
    }
    sendTick(tMs) {
        this.send(messages.tick(tMs));
    }
    resume() {
        this.send(messages.resume());
    }
    close() {
        this.socket?.close();
    }
}
//# sourceMappingURL=client.js.map