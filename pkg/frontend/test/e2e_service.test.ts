// Scripted headless client: boots the real Python service, completes one
// CTRL sentence over the WebSocket protocol with hold-to-commit dynamics,
// then checks that the produced log is accepted by the analyzer CLI.

import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, readdirSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { WebSocket } from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { GameClient } from "../src/client.js";
import { messages, type ServerMessage, type ViewPayload } from "../src/wire.js";

const execFileAsync = promisify(execFile);
const PYTHON = process.env.PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      if (address && typeof address === "object") {
        const port = address.port;
        server.close(() => resolve(port));
      } else {
        reject(new Error("no port"));
      }
    });
  });
}

class MessageQueue {
  private buffer: ServerMessage[] = [];
  private waiters: Array<(m: ServerMessage) => void> = [];
  maxUntil = 0;

  push(message: ServerMessage): void {
    if (message.type === "animating") {
      this.maxUntil = Math.max(this.maxUntil, message.until_ms);
    }
    const waiter = this.waiters.shift();
    if (waiter) waiter(message);
    else this.buffer.push(message);
  }

  next(timeoutMs = 8000): Promise<ServerMessage> {
    const buffered = this.buffer.shift();
    if (buffered) return Promise.resolve(buffered);
    return new Promise((resolve, reject) => {
      const timer = setTimeout(() => reject(new Error("timed out waiting for message")), timeoutMs);
      this.waiters.push((m) => {
        clearTimeout(timer);
        resolve(m);
      });
    });
  }

  async until<T extends ServerMessage>(pred: (m: ServerMessage) => m is T): Promise<T>;
  async until(pred: (m: ServerMessage) => boolean): Promise<ServerMessage>;
  async until(pred: (m: ServerMessage) => boolean): Promise<ServerMessage> {
    for (let i = 0; i < 200; i++) {
      const message = await this.next();
      if (pred(message)) return message;
      if (message.type === "error") {
        throw new Error(`server error: ${message.code}: ${message.message}`);
      }
    }
    throw new Error("too many messages without a match");
  }
}

let server: ChildProcess;
let port: number;
let logDir: string;
let baseUrl: string;

beforeAll(async () => {
  port = await freePort();
  logDir = mkdtempSync(join(tmpdir(), "parsegame-e2e-"));
  server = spawn(
    PYTHON,
    ["-m", "parsegame", "serve", "--port", String(port), "--logs", logDir],
    { stdio: ["ignore", "pipe", "pipe"] },
  );
  baseUrl = `http://127.0.0.1:${port}`;
  const deadline = Date.now() + 20_000;
  for (;;) {
    try {
      const response = await fetch(`${baseUrl}/healthz`);
      if (response.ok) break;
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) throw new Error("service did not come up");
    await new Promise((r) => setTimeout(r, 150));
  }
}, 30_000);

afterAll(async () => {
  if (server && server.exitCode === null) {
    server.kill("SIGTERM");
    await new Promise((resolve) => server.once("exit", resolve));
  }
});

describe("scripted client against the live service", () => {
  it(
    "completes a CTRL sentence and the analyzer accepts the log",
    async () => {
      const corpusInfo = (await (await fetch(`${baseUrl}/corpus`)).json()) as {
        by_type: Record<string, { ids: string[] }>;
      };
      const ctrlId = corpusInfo.by_type.CTRL.ids[0];
      expect(ctrlId).toBeTruthy();

      const createResponse = await fetch(`${baseUrl}/sessions`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({
          subject_id: "scripted",
          sentence_ids: [ctrlId],
          agent: "scripted",
          seed: 1,
          start_ms: 0,
        }),
      });
      expect(createResponse.status).toBe(201);
      const session = (await createResponse.json()) as {
        session_id: string;
        engine: { icon_speed: number; animation_ms: number };
        view: ViewPayload;
      };
      const travel = 1000 / session.engine.icon_speed;

      const queue = new MessageQueue();
      const client = new GameClient(
        `ws://127.0.0.1:${port}/sessions/${session.session_id}/ws`,
        { onMessage: (m) => queue.push(m) },
        (url) => new WebSocket(url) as never,
      );
      await client.connect();
      await queue.until((m) => m.type === "view");

      // The control template's correct judged sequence: the icon must
      // reach the SHIFT wall, then REDUCE three times, then SHIFT.
      const directions = ["LEFT", "RIGHT", "RIGHT", "RIGHT", "LEFT"] as const;
      let sent = 0;
      let tClock = 0;
      let finalView: ViewPayload | null = null;

      for (let guard = 0; guard < 60; guard++) {
        client.resume();
        const viewMsg = await queue.until(
          (m): m is Extract<ServerMessage, { type: "view" }> => m.type === "view",
        );
        const view = viewMsg.view;
        if (view.icon.phase === "TRIAL_DONE" || view.session_complete) {
          finalView = view;
          break;
        }
        if (view.icon.phase === "AWAIT_JUDGMENT" && sent < directions.length) {
          // Never send behind our own ticks; the view may predate them.
          const lean = Math.max(view.clock_ms ?? 0, tClock) + 150;
          client.sendDirection(lean, directions[sent]);
          const crossTick = lean + travel + 1;
          client.sendTick(crossTick);
          const committed = await queue.until(
            (m) => m.type === "action_committed" && !("auto" in m && m.auto),
          );
          expect(committed.type).toBe("action_committed");
          client.sendDirection(crossTick, "NEUTRAL");
          tClock = crossTick;
          sent += 1;
        } else {
          // Animating: tick past the known chain end, or one window ahead
          // when no animating message has been seen on this connection.
          tClock =
            Math.max(tClock, queue.maxUntil, view.clock_ms ?? 0) +
            session.engine.animation_ms;
          client.sendTick(tClock);
        }
      }

      expect(sent).toBe(directions.length);
      expect(finalView).not.toBeNull();
      expect(finalView!.verdict).toBe("OK");

      const jumpAt = Math.max(tClock, queue.maxUntil) + 500;
      client.sendJump(jumpAt);
      const done = await queue.until((m) => m.type === "session_done");
      expect(done.type).toBe("session_done");
      client.close();

      // The server flushed the completed session; the analyzer must take it.
      const files = readdirSync(logDir).filter((f) => f.endsWith(".jsonl"));
      expect(files.length).toBeGreaterThan(0);
      const records = readFileSync(join(logDir, files[0]), "utf-8")
        .trim()
        .split("\n")
        .map((line) => JSON.parse(line));
      const trial = records.find((r) => r.rec === "trial");
      expect(trial.verdict).toBe("OK");
      expect(trial.actions).toHaveLength(10);
      const end = records.find((r) => r.rec === "end");
      expect(end.complete).toBe(true);

      const analyzed = await execFileAsync(PYTHON, ["-m", "parsegame", "analyze", logDir]);
      expect(analyzed.stdout).toContain("CTRL");
      expect(analyzed.stdout).toMatch(/acc\. \(%\)\s+ave\.\s+100/);
    },
    40_000,
  );
});
