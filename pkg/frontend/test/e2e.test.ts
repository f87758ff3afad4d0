// End-to-end: the real client session logic against a live server process,
// seated with three server-attached greedy agents. Uses the socket binding
// (newline-delimited JSON); the browser uses the same messages over
// WebSocket frames.

import { spawn, ChildProcess } from "node:child_process";
import net from "node:net";
import readline from "node:readline";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Session } from "../src/session.js";
import { ServerMessage } from "../src/protocol.js";

const PORT = 9719;
let server: ChildProcess;

function waitForPort(port: number, tries = 50): Promise<void> {
  return new Promise((resolve, reject) => {
    const attempt = (left: number) => {
      const sock = net.createConnection(port, "127.0.0.1");
      sock.once("connect", () => { sock.end(); resolve(); });
      sock.once("error", () => {
        if (left <= 0) reject(new Error("server did not come up"));
        else setTimeout(() => attempt(left - 1), 200);
      });
    };
    attempt(tries);
  });
}

beforeAll(async () => {
  server = spawn("python3", [
    "-m", "guandan.cli", "serve", "--host", "127.0.0.1",
    "--port", String(PORT), "--autofill", "greedy",
    "--seed", "404", "--act-timeout", "0",
  ], { cwd: "..", stdio: "ignore" });
  await waitForPort(PORT);
}, 30_000);

afterAll(() => {
  server.kill();
});

describe("full match against server-attached agents", () => {
  it("plays a complete match with every stage rendered", async () => {
    const stagesSeen = new Set<string>();
    let submitted = 0;
    const session = new Session((state) => {
      if (state.request !== null) {
        // the simulated player always takes the first listed option
        // (pass when following, the smallest action when leading)
        queueMicrotask(() => {
          if (session.state.request !== null && session.submit(0)) {
            submitted += 1;
          }
        });
      }
    });

    const finished = new Promise<void>((resolve, reject) => {
      const sock = net.createConnection(PORT, "127.0.0.1");
      const timer = setTimeout(() => reject(new Error("match timed out")), 90_000);
      sock.once("connect", () => {
        session.attach(
          { send: (text) => sock.write(text + "\n"), close: () => sock.end() },
          { userId: "human", seatNum: 0, create: true, rounds: 1, roomId: 1 },
        );
      });
      const lines = readline.createInterface({ input: sock });
      lines.on("line", (line) => {
        const msg = JSON.parse(line) as ServerMessage;
        if (msg.type === "notify") stagesSeen.add(msg.stage);
        session.receive(msg);
        if (session.state.phase === "matchOver"
            && session.state.series !== null) {
          clearTimeout(timer);
          sock.end();
          resolve();
        }
      });
      sock.once("error", (err) => { clearTimeout(timer); reject(err); });
    });

    await finished;
    expect(submitted).toBeGreaterThan(0);
    for (const stage of ["beginning", "play", "tribute", "back",
                         "episodeOver", "gameOver", "gameResult"]) {
      expect(stagesSeen, `stage ${stage} missing`).toContain(stage);
    }
    expect(session.state.victory).not.toBeNull();
    expect(session.state.error).toBeNull();
  }, 120_000);
});
