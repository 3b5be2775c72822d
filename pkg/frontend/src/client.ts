// WebSocket game client: transport and view bookkeeping, zero game rules.
// Reloading the page and resuming always converges to the server's state.

import {
  messages,
  parseServerMessage,
  type Direction,
  type ServerMessage,
  type ViewPayload,
} from "./wire.js";

export interface SocketLike {
  send(data: string): void;
  close(): void;
  addEventListener(type: "open" | "close", fn: () => void): void;
  addEventListener(type: "message", fn: (event: { data: unknown }) => void): void;
}

export type SocketFactory = (url: string) => SocketLike;

export interface ClientHandlers {
  onMessage?(message: ServerMessage): void;
  onView?(view: ViewPayload): void;
  onOpen?(): void;
  onClose?(): void;
}

export class GameClient {
  view: ViewPayload | null = null;
  lastSeq = 0;
  private socket: SocketLike | null = null;

  constructor(
    private url: string,
    private handlers: ClientHandlers,
    private factory: SocketFactory,
  ) {}

  connect(): Promise<void> {
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

  private send(payload: string): void {
    this.socket?.send(payload);
  }

  sendDirection(tMs: number, direction: Direction): void {
    this.send(messages.inputEvent(tMs, direction));
  }

  sendJump(tMs: number): void {
    this.send(messages.jump(tMs));
  }

  sendTick(tMs: number): void {
    this.send(messages.tick(tMs));
  }

  resume(): void {
    this.send(messages.resume());
  }

  close(): void {
    this.socket?.close();
  }
}
