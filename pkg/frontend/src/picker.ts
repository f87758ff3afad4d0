// Selection-to-action matching. The picker can only ever surface indices
// into the current actionList, which is the structural legality guarantee:
// nothing outside the served list is submittable.

import { ActRequest, WireAction, isPass } from "./protocol.js";

function multisetKey(codes: string[]): string {
  return [...codes].sort().join(",");
}

export interface Candidate {
  index: number;
  action: WireAction;
}

/** Indices of actionList whose exact card multiset equals the selection.
 * Several entries may match one selection (e.g. a straight that is also a
 * straight flush); the caller disambiguates by listed type and key. */
export function candidatesForSelection(
  actionList: WireAction[],
  selected: string[],
): Candidate[] {
  if (selected.length === 0) return [];
  const key = multisetKey(selected);
  const out: Candidate[] = [];
  for (let i = 0; i < actionList.length; i++) {
    const action = actionList[i];
    if (isPass(action)) continue;
    if (multisetKey(action[2] as string[]) === key) {
      out.push({ index: i, action });
    }
  }
  return out;
}

/** The index of Pass in the actionList, or null when leading. */
export function passIndex(actionList: WireAction[]): number | null {
  for (let i = 0; i < actionList.length; i++) {
    if (isPass(actionList[i])) return i;
  }
  return null;
}

/** Card codes that appear in at least one listed action; used to highlight
 * playable tiles. */
export function playableCodes(actionList: WireAction[]): Set<string> {
  const out = new Set<string>();
  for (const action of actionList) {
    if (isPass(action)) continue;
    for (const code of action[2] as string[]) out.add(code);
  }
  return out;
}

/** Validate an index against the open request before submitting. */
export function submittable(request: ActRequest | null, index: number): boolean {
  if (request === null) return false;
  return Number.isInteger(index) && index >= 0 && index <= request.indexRange;
}
