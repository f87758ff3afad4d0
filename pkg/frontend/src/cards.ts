// Card-code helpers: two-character codes, suit glyphs, and the elevated
// ordering used to sort a hand (level card above A, jokers on top).

export const RANK_CHARS = "23456789TJQKA";

const SUIT_GLYPHS: Record<string, string> = {
  S: "♠",
  H: "♥",
  C: "♣",
  D: "♦",
};

export function isJoker(code: string): boolean {
  return code === "SB" || code === "HR";
}

export function suitOf(code: string): string {
  return code[0];
}

export function rankOf(code: string): string {
  return code[1];
}

export function isRed(code: string): boolean {
  return code === "HR" || code[0] === "H" || code[0] === "D";
}

export function cardLabel(code: string): string {
  if (code === "SB") return "Joker";
  if (code === "HR") return "JOKER";
  const rank = rankOf(code) === "T" ? "10" : rankOf(code);
  return `${rank}${SUIT_GLYPHS[suitOf(code)]}`;
}

/** Sort value under the current round level: 2..A natural with the level
 * rank promoted above A, black joker next, red joker highest. */
export function elevatedValue(code: string, curRank: string): number {
  if (code === "HR") return 102;
  if (code === "SB") return 101;
  const rank = rankOf(code);
  if (rank === curRank) return 100;
  return RANK_CHARS.indexOf(rank);
}

export function isWild(code: string, curRank: string): boolean {
  return suitOf(code) === "H" && rankOf(code) === curRank && !isJoker(code);
}

const SUIT_ORDER = "SHCD";

export function sortHand(codes: string[], curRank: string): string[] {
  return [...codes].sort((a, b) => {
    const d = elevatedValue(a, curRank) - elevatedValue(b, curRank);
    if (d !== 0) return d;
    return SUIT_ORDER.indexOf(suitOf(a)) - SUIT_ORDER.indexOf(suitOf(b));
  });
}

/** Remove one occurrence of each code in `taken` from `hand`. */
export function removeCards(hand: string[], taken: string[]): string[] {
  const rest = [...hand];
  for (const code of taken) {
    const i = rest.indexOf(code);
    if (i >= 0) rest.splice(i, 1);
  }
  return rest;
}
