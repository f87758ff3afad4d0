// Wire protocol types. Field names and the 3-element action form are the
// server contract and must not drift.

export type WireAction = [string, string, string[]] | ["PASS", "PASS", "PASS"];

export interface BeginningNotify {
  type: "notify";
  stage: "beginning";
  handCards: string[];
  myPos: number;
}

export interface PlayNotify {
  type: "notify";
  stage: "play";
  curPos: number;
  curAction: WireAction;
  greaterPos: number | null;
  greaterAction: WireAction | null;
}

export interface TributeNotify {
  type: "notify";
  stage: "tribute";
  result: [number, number, string][];
}

export interface AntiTributeNotify {
  type: "notify";
  stage: "anti-tribute";
  antiNums: number;
  antiPos: number[];
}

export interface BackNotify {
  type: "notify";
  stage: "back";
  result: [number, number, string][];
}

export interface EpisodeOverNotify {
  type: "notify";
  stage: "episodeOver";
  order: number[];
  curRank: string;
  restCards: [number, string[]][];
}

export interface GameOverNotify {
  type: "notify";
  stage: "gameOver";
  curTimes: number;
  settingTimes: number;
}

export interface GameResultNotify {
  type: "notify";
  stage: "gameResult";
  victory: number;
  victoryRank: [string, string];
}

export type ServerNotify =
  | BeginningNotify
  | PlayNotify
  | TributeNotify
  | AntiTributeNotify
  | BackNotify
  | EpisodeOverNotify
  | GameOverNotify
  | GameResultNotify;

export interface PlayRequest {
  type: "act";
  stage: "play";
  handCards: string[];
  publicInfo: { rest: number }[];
  selfRank: string;
  oppoRank: string;
  curRank: string;
  curPos: number | null;
  curAction: WireAction | null;
  greaterAction: WireAction | null;
  greaterPos: number | null;
  actionList: WireAction[];
  indexRange: number;
}

export interface TributeRequest {
  type: "act";
  stage: "tribute";
  handCards: string[];
  selfRank: string;
  oppoRank: string;
  curRank: string;
  actionList: WireAction[];
  indexRange: number;
}

export interface BackRequest {
  type: "act";
  stage: "back";
  handCards: string[];
  selfRank: string;
  oppoRank: string;
  curRank: string;
  tributePos: number;
  tribute: string;
  actionList: WireAction[];
  indexRange: number;
}

export type ActRequest = PlayRequest | TributeRequest | BackRequest;

export interface AckMessage {
  type: "ack";
  roomId: number;
  seatNum: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  message: string;
}

export type ServerMessage = ServerNotify | ActRequest | AckMessage | ErrorMessage;

export interface CreateRoomMessage {
  type: "CREATE_ROOM";
  data: { userId: string; round: number; seatNum: number };
}

export interface JoinRoomMessage {
  type: "JOIN_ROOM";
  data: { userId: string; roomId: number; seatNum: number };
}

export interface PlayMessage {
  type: "PLAY";
  data: { roomId: number; player: number; act: WireAction };
}

export interface TributeMessage {
  type: "TRIBUTE";
  data: { roomId: number; player: number; act: WireAction };
}

export interface PayTributeMessage {
  type: "PAYTRIBUTE";
  data: {
    roomId: number;
    player: number;
    tributePos: number;
    tribute: string;
    act: WireAction;
  };
}

export type ClientMessage =
  | CreateRoomMessage
  | JoinRoomMessage
  | PlayMessage
  | TributeMessage
  | PayTributeMessage;

export const PASS_ACTION: WireAction = ["PASS", "PASS", "PASS"];

export function isPass(action: WireAction | null): boolean {
  return action !== null && action[0] === "PASS";
}
