import { describe, expect, it } from "vitest";

import {
  candidatesForSelection,
  passIndex,
  playableCodes,
  submittable,
} from "../src/picker.js";
import { ActRequest, WireAction } from "../src/protocol.js";

const actionList: WireAction[] = [
  ["PASS", "PASS", "PASS"],
  ["Single", "9", ["S9"]],
  ["Pair", "9", ["S9", "C9"]],
  ["Straight", "9", ["S5", "S6", "S7", "S8", "S9"]],
  ["StraightFlush", "9", ["S5", "S6", "S7", "S8", "S9"]],
];

describe("action picker", () => {
  it("matches a selection to the exact card multiset", () => {
    const got = candidatesForSelection(actionList, ["C9", "S9"]);
    expect(got.map((c) => c.index)).toEqual([2]);
  });

  it("offers both interpretations of an ambiguous selection", () => {
    const got = candidatesForSelection(actionList, ["S9", "S8", "S7", "S6", "S5"]);
    expect(got.map((c) => c.action[0])).toEqual(["Straight", "StraightFlush"]);
  });

  it("returns nothing for unlisted selections or empty selection", () => {
    expect(candidatesForSelection(actionList, ["S2"])).toEqual([]);
    expect(candidatesForSelection(actionList, [])).toEqual([]);
  });

  it("never surfaces pass as a card candidate", () => {
    for (const c of candidatesForSelection(actionList, ["S9"])) {
      expect(c.action[0]).not.toBe("PASS");
    }
    expect(passIndex(actionList)).toBe(0);
    expect(passIndex(actionList.slice(1))).toBeNull();
  });

  it("collects playable codes for tile highlighting", () => {
    const codes = playableCodes(actionList);
    expect(codes.has("S9")).toBe(true);
    expect(codes.has("S2")).toBe(false);
  });

  it("submittable respects the indexRange", () => {
    const request = {
      type: "act", stage: "play", handCards: ["S9"], publicInfo: [
        { rest: 1 }, { rest: 1 }, { rest: 1 }, { rest: 1 }],
      selfRank: "2", oppoRank: "2", curRank: "2", curPos: null,
      curAction: null, greaterAction: null, greaterPos: null,
      actionList, indexRange: actionList.length - 1,
    } as ActRequest;
    expect(submittable(request, 0)).toBe(true);
    expect(submittable(request, actionList.length - 1)).toBe(true);
    expect(submittable(request, actionList.length)).toBe(false);
    expect(submittable(request, -1)).toBe(false);
    expect(submittable(null, 0)).toBe(false);
  });
});
