"""Card identities, the two-deck composition, and rank ordering primitives.

Cards are plain ints 0..53 on hot paths (suit*13+rank for the four suits,
52 = black joker, 53 = red joker); two copies of each id make the 108-card
deck. Ranks are ints 0..12 for 2..A in natural order, 13/14 for the jokers.
A thin :class:`Card` wrapper exists for code round-trips and debugging.
"""

from __future__ import annotations

import hashlib
import random
import struct
from dataclasses import dataclass
from enum import Enum

SPADE, HEART, CLUB, DIAMOND = 0, 1, 2, 3
SUIT_CHARS = "SHCD"

RANK_CHARS = "23456789TJQKABR"  # B = black joker, R = red joker
RANK_2 = 0
RANK_10 = 8
RANK_A = 12
BLACK_JOKER = 13
RED_JOKER = 14
NUM_RANKS = 15

NUM_CARD_KINDS = 54
BLACK_JOKER_CARD = 52
RED_JOKER_CARD = 53
DECK_SIZE = 108

# Levels are the ranks 2..A (0..12); the round level decides which cards are
# elevated and which hearts are wild.
LEVELS = tuple(range(13))


class Mode(Enum):
    """Rank comparison mode."""

    ELEVATED = "elevated"  # level card sits between A and the black joker
    NATURAL = "natural"    # pure 2..A sequence order; jokers rejected


def card_id(suit: int, rank: int) -> int:
    """Card id for a non-joker (suit, rank); jokers have fixed ids."""
    if rank == BLACK_JOKER:
        return BLACK_JOKER_CARD
    if rank == RED_JOKER:
        return RED_JOKER_CARD
    return suit * 13 + rank


def card_rank(cid: int) -> int:
    if cid >= 52:
        return BLACK_JOKER if cid == BLACK_JOKER_CARD else RED_JOKER
    return cid % 13


def card_suit(cid: int) -> int:
    """Suit of a card. Jokers carry conventional suits (spade/heart) used
    only by the string codec, never by comparison."""
    if cid == BLACK_JOKER_CARD:
        return SPADE
    if cid == RED_JOKER_CARD:
        return HEART
    return cid // 13


def card_code(cid: int) -> str:
    if cid == BLACK_JOKER_CARD:
        return "SB"
    if cid == RED_JOKER_CARD:
        return "HR"
    return SUIT_CHARS[cid // 13] + RANK_CHARS[cid % 13]


def card_from_code(code: str) -> int:
    if code == "SB":
        return BLACK_JOKER_CARD
    if code == "HR":
        return RED_JOKER_CARD
    if len(code) != 2:
        raise ValueError(f"bad card code: {code!r}")
    try:
        suit = SUIT_CHARS.index(code[0])
        rank = RANK_CHARS.index(code[1])
    except ValueError:
        raise ValueError(f"bad card code: {code!r}") from None
    if rank > RANK_A:
        raise ValueError(f"bad card code: {code!r}")
    return suit * 13 + rank


def rank_char(rank: int) -> str:
    return RANK_CHARS[rank]


def rank_from_char(ch: str) -> int:
    rank = RANK_CHARS.index(ch)
    return rank


def wild_card_id(level: int) -> int:
    """The heart-suited level card: the only wild identity for that level."""
    return HEART * 13 + level


def is_wild(cid: int, level: int) -> bool:
    return cid == HEART * 13 + level


# ELEVATED_VALUE[level][rank] -> total-order value with the level rank pulled
# out of its natural slot and re-inserted between A and the black joker.
def _build_elevated_table() -> tuple[tuple[int, ...], ...]:
    table = []
    for level in LEVELS:
        order = [r for r in range(13) if r != level] + [level, BLACK_JOKER, RED_JOKER]
        values = [0] * NUM_RANKS
        for pos, r in enumerate(order):
            values[r] = pos
        table.append(tuple(values))
    return tuple(table)


ELEVATED_VALUE: tuple[tuple[int, ...], ...] = _build_elevated_table()


def elevated_value(rank: int, level: int) -> int:
    return ELEVATED_VALUE[level][rank]


def compare_rank(a: int, b: int, level: int, mode: Mode = Mode.ELEVATED) -> int:
    """Three-way rank comparison: -1, 0 or 1.

    ELEVATED applies the level-card promotion; NATURAL is the plain 2..A
    sequence order used by straights/tubes/plates and rejects jokers.
    """
    if mode is Mode.NATURAL:
        if a >= BLACK_JOKER or b >= BLACK_JOKER:
            raise ValueError("jokers have no natural sequence order")
        va, vb = a, b
    else:
        row = ELEVATED_VALUE[level]
        va, vb = row[a], row[b]
    return (va > vb) - (va < vb)


def build_deck() -> list[int]:
    """The canonical 108-card multiset: two copies of each of the 54 ids."""
    return [cid for cid in range(NUM_CARD_KINDS) for _ in range(2)]


def shuffled_deck(rng: random.Random) -> list[int]:
    deck = build_deck()
    rng.shuffle(deck)
    return deck


def deal(deck_order: list[int]) -> tuple[tuple[int, ...], ...]:
    """Round-robin deal of a 108-card order into four 27-card hands."""
    if len(deck_order) != DECK_SIZE:
        raise ValueError("deal requires the full 108-card deck")
    return tuple(tuple(deck_order[seat::4]) for seat in range(4))


def shuffle_deal(deck: list[int], rng_seed: int) -> tuple[tuple[int, ...], ...]:
    """Shuffle the given deck with a seeded RNG and deal four 27-card hands."""
    order = list(deck)
    random.Random(rng_seed).shuffle(order)
    return deal(order)


def derive_seed(master: int, *parts: int | str) -> int:
    """Deterministic seed derivation so every stream splits from one master.

    Stable across platforms and runs (blake2b over the packed inputs).
    """
    h = hashlib.blake2b(struct.pack("<q", master), digest_size=8)
    for part in parts:
        if isinstance(part, int):
            h.update(b"i" + struct.pack("<q", part))
        else:
            h.update(b"s" + part.encode("utf-8"))
    return int.from_bytes(h.digest(), "little") & 0x7FFF_FFFF_FFFF_FFFF


def sort_key(level: int):
    """Sort key for displaying a hand: elevated rank, then suit."""
    row = ELEVATED_VALUE[level]

    def key(cid: int) -> tuple[int, int]:
        return (row[card_rank(cid)], card_suit(cid))

    return key


@dataclass(frozen=True)
class Card:
    """Convenience wrapper around a card id.

    Round-trips exactly through its two-character code; engine internals use
    the raw int ids.
    """

    suit: int
    rank: int

    @property
    def id(self) -> int:
        return card_id(self.suit, self.rank)

    @property
    def code(self) -> str:
        return card_code(self.id)

    @classmethod
    def from_id(cls, cid: int) -> "Card":
        return cls(card_suit(cid), card_rank(cid))

    @classmethod
    def from_code(cls, code: str) -> "Card":
        return cls.from_id(card_from_code(code))

    def is_wild(self, level: int) -> bool:
        return self.suit == HEART and self.rank == level

    def __str__(self) -> str:
        return self.code
