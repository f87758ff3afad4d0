// Pure table-state reducer: every server message maps to a new state.
// Rendering reads this state only, so the view can never show anything the
// player's own messages did not carry.

import {
  ActRequest,
  ServerMessage,
  WireAction,
  isPass,
} from "./protocol.js";
import { removeCards, sortHand } from "./cards.js";

export type SessionPhase =
  | "lobby"
  | "waiting"
  | "playing"
  | "roundOver"
  | "matchOver";

export interface TableState {
  phase: SessionPhase;
  roomId: number | null;
  myPos: number | null;
  hand: string[];
  rest: (number | null)[];
  lastAction: (WireAction | null)[];
  greaterPos: number | null;
  greaterAction: WireAction | null;
  selfRank: string;
  oppoRank: string;
  curRank: string;
  finishOrder: number[];
  banner: string;
  request: ActRequest | null;
  series: { cur: number; total: number } | null;
  victory: { team: number; ranks: [string, string] } | null;
  error: string | null;
  log: string[];
}

export function initialState(): TableState {
  return {
    phase: "lobby",
    roomId: null,
    myPos: null,
    hand: [],
    rest: [null, null, null, null],
    lastAction: [null, null, null, null],
    greaterPos: null,
    greaterAction: null,
    selfRank: "2",
    oppoRank: "2",
    curRank: "2",
    finishOrder: [],
    banner: "not connected",
    request: null,
    series: null,
    victory: null,
    error: null,
    log: [],
  };
}

function describe(action: WireAction): string {
  if (isPass(action)) return "pass";
  return `${action[0]} ${action[1]} [${(action[2] as string[]).join(" ")}]`;
}

function note(state: TableState, line: string): TableState {
  return { ...state, log: [...state.log.slice(-199), line] };
}

/** Apply one server message. Unknown shapes are surfaced, never dropped. */
export function applyServer(state: TableState, msg: ServerMessage): TableState {
  switch (msg.type) {
    case "ack":
      return note(
        { ...state, roomId: msg.roomId, myPos: msg.seatNum, phase: "waiting",
          banner: `room ${msg.roomId}, seat ${msg.seatNum}: waiting for players` },
        `joined room ${msg.roomId} at seat ${msg.seatNum}`,
      );
    case "error":
      return note(
        { ...state, error: `${msg.code}: ${msg.message}` },
        `server error ${msg.code}: ${msg.message}`,
      );
    case "act":
      return note(
        { ...state,
          request: msg,
          hand: sortHand(msg.handCards, msg.curRank),
          selfRank: msg.selfRank,
          oppoRank: msg.oppoRank,
          curRank: msg.curRank,
          rest: msg.stage === "play"
            ? msg.publicInfo.map((e) => e.rest)
            : state.rest,
          greaterPos: msg.stage === "play" ? msg.greaterPos : state.greaterPos,
          greaterAction: msg.stage === "play" ? msg.greaterAction : state.greaterAction,
          banner: msg.stage === "play"
            ? "your turn"
            : msg.stage === "tribute"
              ? "pay tribute: choose a card"
              : `return a card for the tribute (${msg.tribute})`,
          error: null },
        `asked to act (${msg.stage}, ${msg.actionList.length} options)`,
      );
    case "notify":
      return applyNotify(state, msg);
  }
}

function applyNotify(state: TableState, msg: Extract<ServerMessage, { type: "notify" }>): TableState {
  switch (msg.stage) {
    case "beginning": {
      const rest: (number | null)[] = [27, 27, 27, 27];
      return note(
        { ...state,
          phase: "playing",
          myPos: msg.myPos,
          hand: sortHand(msg.handCards, state.curRank),
          rest,
          lastAction: [null, null, null, null],
          greaterPos: null,
          greaterAction: null,
          finishOrder: [],
          victory: null,
          banner: "new round dealt",
          request: null },
        `round dealt: ${msg.handCards.length} cards`,
      );
    }
    case "play": {
      const lastAction = [...state.lastAction];
      lastAction[msg.curPos] = msg.curAction;
      const rest = [...state.rest];
      let hand = state.hand;
      if (!isPass(msg.curAction)) {
        const played = msg.curAction[2] as string[];
        if (rest[msg.curPos] !== null) {
          rest[msg.curPos] = (rest[msg.curPos] as number) - played.length;
        }
        if (msg.curPos === state.myPos) {
          hand = removeCards(hand, played);
        }
      }
      const finishOrder =
        rest[msg.curPos] === 0 && !state.finishOrder.includes(msg.curPos)
          ? [...state.finishOrder, msg.curPos]
          : state.finishOrder;
      return note(
        { ...state, hand, rest, lastAction, finishOrder,
          greaterPos: msg.greaterPos, greaterAction: msg.greaterAction,
          banner: `seat ${msg.curPos} ${isPass(msg.curAction) ? "passed" : "played"}`,
          request: msg.curPos === state.myPos ? null : state.request },
        `seat ${msg.curPos}: ${describe(msg.curAction)}`,
      );
    }
    case "tribute":
    case "back": {
      let hand = state.hand;
      const rest = [...state.rest];
      for (const [giver, receiver, code] of msg.result) {
        if (giver === state.myPos) hand = removeCards(hand, [code]);
        if (receiver === state.myPos) hand = sortHand([...hand, code], state.curRank);
        if (rest[giver] !== null) rest[giver] = (rest[giver] as number) - 1;
        if (rest[receiver] !== null) rest[receiver] = (rest[receiver] as number) + 1;
      }
      const verb = msg.stage === "tribute" ? "tribute" : "tribute returned";
      const lines = msg.result
        .map(([g, r, c]) => `${verb}: seat ${g} -> seat ${r} (${c})`)
        .join("; ");
      return note({ ...state, hand, rest, banner: lines, request: null }, lines);
    }
    case "anti-tribute":
      return note(
        { ...state,
          banner: `anti-tribute: seats ${msg.antiPos.join(", ")} hold the red jokers` },
        `anti-tribute by ${msg.antiNums} player(s): ${msg.antiPos.join(", ")}`,
      );
    case "episodeOver":
      return note(
        { ...state,
          phase: "roundOver",
          finishOrder: msg.order,
          curRank: msg.curRank,
          banner: `round over: finish order ${msg.order.join(" > ")}`,
          request: null },
        `round over at level ${msg.curRank}; order ${msg.order.join(" > ")}; ` +
        `rest ${msg.restCards.map(([s, cs]) => `seat ${s}: ${cs.join(" ")}`).join(" | ")}`,
      );
    case "gameOver":
      return note(
        { ...state, series: { cur: msg.curTimes, total: msg.settingTimes } },
        `match ${msg.curTimes} of ${msg.settingTimes} finished`,
      );
    case "gameResult":
      return note(
        { ...state,
          phase: "matchOver",
          victory: { team: msg.victory, ranks: msg.victoryRank },
          banner: `team ${msg.victory} wins at ${msg.victoryRank[0]} ` +
                  `(opponents at ${msg.victoryRank[1]})`,
          request: null },
        `team ${msg.victory} wins: ${msg.victoryRank.join(" vs ")}`,
      );
    default: {
      // exhaustiveness guard: a new stage must get a renderer
      const unknown: never = msg;
      return note(state, `unhandled notify: ${JSON.stringify(unknown)}`);
    }
  }
}
