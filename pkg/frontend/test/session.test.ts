import { describe, expect, it } from "vitest";

import { ClientMessage, ServerMessage } from "../src/protocol.js";
import { Session } from "../src/session.js";

function harness(create = true) {
  const sent: ClientMessage[] = [];
  const session = new Session(() => {});
  session.attach(
    { send: (text) => sent.push(JSON.parse(text)), close: () => {} },
    { userId: "u", seatNum: 0, create, rounds: 1, roomId: 1 },
  );
  const feed = (msg: ServerMessage) => session.receive(msg);
  return { session, sent, feed };
}

const playRequest: ServerMessage = {
  type: "act", stage: "play", handCards: ["S9", "C9"],
  publicInfo: [{ rest: 2 }, { rest: 5 }, { rest: 9 }, { rest: 27 }],
  selfRank: "2", oppoRank: "2", curRank: "2", curPos: null, curAction: null,
  greaterAction: null, greaterPos: null,
  actionList: [["Single", "9", ["S9"]], ["Pair", "9", ["S9", "C9"]]],
  indexRange: 1,
};

describe("session", () => {
  it("opens with the exact create/join form", () => {
    const { sent } = harness(true);
    expect(sent[0]).toEqual({
      type: "CREATE_ROOM",
      data: { userId: "u", round: 1, seatNum: 0 },
    });
    const joiner = harness(false);
    expect(joiner.sent[0]).toEqual({
      type: "JOIN_ROOM",
      data: { userId: "u", roomId: 1, seatNum: 0 },
    });
  });

  it("echoes the served action verbatim and locks input", () => {
    const { session, sent, feed } = harness();
    feed({ type: "ack", roomId: 7, seatNum: 0 });
    feed(playRequest);
    expect(session.submit(1)).toBe(true);
    const msg = sent.at(-1)!;
    expect(msg).toEqual({
      type: "PLAY",
      data: { roomId: 7, player: 0, act: ["Pair", "9", ["S9", "C9"]] },
    });
    // input is locked until the next request arrives
    expect(session.state.request).toBeNull();
    expect(session.submit(0)).toBe(false);
    expect(sent.filter((m) => m.type === "PLAY")).toHaveLength(1);
  });

  it("rejects indices outside the served range", () => {
    const { session, sent, feed } = harness();
    feed({ type: "ack", roomId: 7, seatNum: 0 });
    feed(playRequest);
    expect(session.submit(2)).toBe(false);
    expect(session.submit(-1)).toBe(false);
    expect(sent.filter((m) => m.type === "PLAY")).toHaveLength(0);
  });

  it("re-enables input when the server rejects and re-issues", () => {
    const { session, feed } = harness();
    feed({ type: "ack", roomId: 7, seatNum: 0 });
    feed(playRequest);
    session.submit(0);
    feed({ type: "error", code: "illegal-action", message: "nope" });
    expect(session.state.error).toContain("illegal-action");
    feed(playRequest);
    expect(session.state.request).not.toBeNull();
    expect(session.state.error).toBeNull();
    expect(session.submit(0)).toBe(true);
  });

  it("builds the back-tribute form with the echoed tribute fields", () => {
    const { session, sent, feed } = harness();
    feed({ type: "ack", roomId: 7, seatNum: 0 });
    feed({
      type: "act", stage: "back", handCards: ["H2", "S3"], selfRank: "5",
      oppoRank: "9", curRank: "9", tributePos: 3, tribute: "S2",
      actionList: [["back", "back", ["H2"]], ["back", "back", ["S3"]]],
      indexRange: 1,
    });
    session.submit(0);
    expect(sent.at(-1)).toEqual({
      type: "PAYTRIBUTE",
      data: { roomId: 7, player: 0, tributePos: 3, tribute: "S2",
              act: ["back", "back", ["H2"]] },
    });
  });
});
