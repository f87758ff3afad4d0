"""Combination rules: classification, the beat relation, and legal-action
generation for card play, tribute, and back-tribute.

The two heart-suited level cards are wild: inside a combination they may
stand for any non-joker rank (they keep their physical heart suit, which
matters only to straight flushes). Led as a single they are plain level
cards. Combination sizes run 1..8; the joker bomb is exactly the four
jokers.

Internally an action is a plain tuple ``(ctype, key_rank, cards)`` with
``cards`` a sorted tuple of card ids; the public API wraps these in
:class:`Combination`. Generation works over per-rank suit-count signatures
with precomputed usage tables so the per-action cost stays small.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from itertools import product
from typing import Iterable, Optional, Sequence

from .cards import (
    BLACK_JOKER,
    BLACK_JOKER_CARD,
    ELEVATED_VALUE,
    HEART,
    NUM_CARD_KINDS,
    RANK_A,
    RED_JOKER,
    RED_JOKER_CARD,
    card_code,
    card_from_code,
    card_rank,
    card_suit,
    rank_char,
    rank_from_char,
)


class CombinationType(IntEnum):
    SINGLE = 0
    PAIR = 1
    TRIPLE = 2
    TUBE = 3          # three consecutive pairs
    PLATE = 4         # two consecutive triples
    FULL_HOUSE = 5    # triple + pair, keyed by the triple
    STRAIGHT = 6      # five consecutive singles, A low or high
    BOMB = 7          # four or more of one rank
    STRAIGHT_FLUSH = 8
    JOKER_BOMB = 9    # all four jokers
    PASS = 10


# Int aliases for the hot path.
_SINGLE = 0
_PAIR = 1
_TRIPLE = 2
_TUBE = 3
_PLATE = 4
_FULL_HOUSE = 5
_STRAIGHT = 6
_BOMB = 7
_STRAIGHT_FLUSH = 8
_JOKER_BOMB = 9
_PASS = 10

PASS_TUPLE = (_PASS, -1, ())

TYPE_WIRE_NAMES = {
    _SINGLE: "Single",
    _PAIR: "Pair",
    _TRIPLE: "Triple",
    _TUBE: "Tube",
    _PLATE: "Plate",
    _FULL_HOUSE: "FullHouse",
    _STRAIGHT: "Straight",
    _BOMB: "Bomb",
    _STRAIGHT_FLUSH: "StraightFlush",
    _JOKER_BOMB: "JokerBomb",
}
WIRE_NAME_TYPES = {name: t for t, name in TYPE_WIRE_NAMES.items()}

ActionTuple = tuple  # (ctype, key_rank, cards)


@dataclass(frozen=True)
class Combination:
    """A classified action: type, comparison key, concrete cards, and the
    ranks its wild cards stand for (empty when no wilds are used)."""

    ctype: CombinationType
    key_rank: int
    cards: tuple[int, ...]
    wild_ranks: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.cards)

    def as_tuple(self) -> ActionTuple:
        return (int(self.ctype), self.key_rank, self.cards)

    def __str__(self) -> str:
        if self.ctype is CombinationType.PASS:
            return "PASS"
        codes = ",".join(card_code(c) for c in self.cards)
        return f"{TYPE_WIRE_NAMES[int(self.ctype)]}({rank_char(self.key_rank)}:{codes})"


PASS_COMBINATION = Combination(CombinationType.PASS, -1, ())


# ---------------------------------------------------------------------------
# Precomputed tables.
#
# _USAGE[sig][k]: all ways to take k cards from a rank whose four suit counts
# are sig (each count 0..2). _GROUP_CARDS[(rank, usage)]: the concrete sorted
# card ids realizing a usage.
# ---------------------------------------------------------------------------

def _build_usage_table() -> dict:
    table = {}
    for sig in product(range(3), repeat=4):
        per_k: list[list[tuple[int, ...]]] = [[] for _ in range(9)]
        for usage in product(*(range(c + 1) for c in sig)):
            k = usage[0] + usage[1] + usage[2] + usage[3]
            if 0 < k <= 8:
                per_k[k].append(usage)
        table[sig] = tuple(tuple(u) for u in per_k)
    return table


_USAGE = _build_usage_table()

_GROUP_CARDS = {
    (r, usage): tuple(
        cid
        for suit in range(4)
        for cid in (suit * 13 + r,) * usage[suit]
    )
    for r in range(13)
    for usage in product(range(3), repeat=4)
}


def _build_windows(length: int) -> tuple[tuple[int, tuple[int, ...]], ...]:
    # A may sit below 2 (key = length-2) or in its natural top slot.
    windows = [(length - 2, (RANK_A,) + tuple(range(length - 1)))]
    for start in range(13 - length + 1):
        windows.append((start + length - 1, tuple(range(start, start + length))))
    return tuple(windows)


_WINDOWS = {2: _build_windows(2), 3: _build_windows(3), 5: _build_windows(5)}


def _window_ranks(length: int, key: int) -> tuple[int, ...]:
    """The rank slots of the unique window of this length with this key."""
    if key == length - 2:
        return (RANK_A,) + tuple(range(length - 1))
    return tuple(range(key - length + 1, key + 1))


# ---------------------------------------------------------------------------
# Hand context for generation.
# ---------------------------------------------------------------------------

class _Hand:
    __slots__ = ("counts", "level", "wild_cid", "w", "sigs", "nat", "pres",
                 "present_ids", "elev", "_pair_opts", "_triple_opts")

    def __init__(self, counts: Sequence[int], level: int):
        self.counts = counts
        self.level = level
        wild_cid = 13 + level
        self.wild_cid = wild_cid
        self.w = counts[wild_cid]
        self.elev = ELEVATED_VALUE[level]
        sigs = []
        nat = []
        pres = []
        present_ids = []
        for r in range(13):
            c0, c1, c2, c3 = counts[r], counts[13 + r], counts[26 + r], counts[39 + r]
            if r == level:
                c1 = 0  # heart level cards are wilds, tracked separately
            sigs.append((c0, c1, c2, c3))
            nat.append(c0 + c1 + c2 + c3)
            ids = []
            if c0:
                ids.append(r)
            if c1:
                ids.append(13 + r)
            if c2:
                ids.append(26 + r)
            if c3:
                ids.append(39 + r)
            pres.append(tuple(ids))
            present_ids.extend(ids)
        if self.w:
            present_ids.append(wild_cid)
        if counts[BLACK_JOKER_CARD]:
            present_ids.append(BLACK_JOKER_CARD)
        if counts[RED_JOKER_CARD]:
            present_ids.append(RED_JOKER_CARD)
        self.sigs = sigs
        self.nat = nat
        self.pres = pres
        self.present_ids = present_ids
        self._pair_opts = None
        self._triple_opts = None

    # (natural cards, wilds used) options per rank; at least one natural.
    def group_opts(self, k: int):
        cached = self._pair_opts if k == 2 else self._triple_opts
        if cached is not None:
            return cached
        opts: list[list[tuple[tuple[int, ...], int]]] = []
        max_w = self.w
        for r in range(13):
            sig = self.sigs[r]
            n = self.nat[r]
            per_rank = []
            if n:
                usage_rows = _USAGE[sig]
                for wu in range(min(max_w, k - 1) + 1):
                    need = k - wu
                    if need > n:
                        continue
                    for usage in usage_rows[need]:
                        per_rank.append((_GROUP_CARDS[(r, usage)], wu))
            opts.append(per_rank)
        if k == 2:
            self._pair_opts = opts
        else:
            self._triple_opts = opts
        return opts


def _merge(nats: tuple[int, ...], wild_cid: int, wu: int) -> tuple[int, ...]:
    """Merge wilds into a single-rank group (already sorted)."""
    if not wu:
        return nats
    return tuple(sorted(nats + (wild_cid,) * wu))


def _merge_multi(nats: tuple[int, ...], wild_cid: int, wu: int) -> tuple[int, ...]:
    """Merge wilds into a cross-rank accumulation; always re-sorts."""
    return tuple(sorted(nats + (wild_cid,) * wu))


# ---------------------------------------------------------------------------
# Per-type generators. All append internal (ctype, key, cards) tuples.
# ``min_elev`` filters elevated-key types; ``min_key`` filters sequence keys.
# ---------------------------------------------------------------------------

def _gen_singles(h: _Hand, out: list, min_elev: int = -1) -> None:
    elev = h.elev
    for cid in h.present_ids:
        r = card_rank(cid)
        if elev[r] > min_elev:
            out.append((_SINGLE, r, (cid,)))


def _gen_pairs(h: _Hand, out: list, min_elev: int = -1) -> None:
    elev = h.elev
    wild = h.wild_cid
    opts = h.group_opts(2)
    two_wilds = h.w >= 2
    for r in range(13):
        if elev[r] <= min_elev:
            continue
        for nats, wu in opts[r]:
            out.append((_PAIR, r, _merge(nats, wild, wu)))
        if two_wilds:
            # two wilds form a pair of any declared rank
            out.append((_PAIR, r, (wild, wild)))
    counts = h.counts
    if counts[BLACK_JOKER_CARD] == 2 and elev[BLACK_JOKER] > min_elev:
        out.append((_PAIR, BLACK_JOKER, (BLACK_JOKER_CARD, BLACK_JOKER_CARD)))
    if counts[RED_JOKER_CARD] == 2 and elev[RED_JOKER] > min_elev:
        out.append((_PAIR, RED_JOKER, (RED_JOKER_CARD, RED_JOKER_CARD)))


def _gen_triples(h: _Hand, out: list, min_elev: int = -1) -> None:
    elev = h.elev
    wild = h.wild_cid
    opts = h.group_opts(3)
    for r in range(13):
        if elev[r] <= min_elev:
            continue
        for nats, wu in opts[r]:
            out.append((_TRIPLE, r, _merge(nats, wild, wu)))


def _gen_full_houses(h: _Hand, out: list, min_elev: int = -1) -> None:
    elev = h.elev
    wild = h.wild_cid
    triples = h.group_opts(3)
    pairs = h.group_opts(2)
    counts = h.counts
    joker_pairs = []
    if counts[BLACK_JOKER_CARD] == 2:
        joker_pairs.append((BLACK_JOKER_CARD, BLACK_JOKER_CARD))
    if counts[RED_JOKER_CARD] == 2:
        joker_pairs.append((RED_JOKER_CARD, RED_JOKER_CARD))
    for r in range(13):
        if elev[r] <= min_elev or not triples[r]:
            continue
        for c3, w3 in triples[r]:
            budget = h.w - w3
            for s in range(13):
                if s == r:
                    continue
                for c2, w2 in pairs[s]:
                    if w2 <= budget:
                        out.append((_FULL_HOUSE, r, _merge_multi(c3 + c2, wild, w3 + w2)))
            for jp in joker_pairs:
                out.append((_FULL_HOUSE, r, _merge_multi(c3 + jp, wild, w3)))
            if budget >= 2:
                # the pair is two wilds; the declared pair rank is immaterial
                out.append((_FULL_HOUSE, r, _merge_multi(c3, wild, w3 + 2)))


def _gen_bombs(h: _Hand, out: list, min_size: int = 4, max_size: int = 8,
               exact_size: int = 0, min_elev: int = -1) -> None:
    elev = h.elev
    wild = h.wild_cid
    max_w = h.w
    sizes = (exact_size,) if exact_size else range(min_size, max_size + 1)
    for r in range(13):
        if elev[r] <= min_elev:
            continue
        n = h.nat[r]
        if n + max_w < (exact_size or min_size):
            continue
        usage_rows = _USAGE[h.sigs[r]]
        for k in sizes:
            for wu in range(min(max_w, k - 2) + 1):
                need = k - wu
                if need > n:
                    continue
                for usage in usage_rows[need]:
                    out.append((_BOMB, r, _merge(_GROUP_CARDS[(r, usage)], wild, wu)))


def _gen_joker_bomb(h: _Hand, out: list) -> None:
    counts = h.counts
    if counts[BLACK_JOKER_CARD] == 2 and counts[RED_JOKER_CARD] == 2:
        out.append((_JOKER_BOMB, RED_JOKER,
                    (BLACK_JOKER_CARD, BLACK_JOKER_CARD, RED_JOKER_CARD, RED_JOKER_CARD)))


def _gen_straights(h: _Hand, out: list, min_key: int = -1) -> None:
    pres = h.pres
    wild = h.wild_cid
    w_total = h.w
    for key, ranks in _WINDOWS[5]:
        if key <= min_key:
            continue
        opts = []
        gaps = 0
        for q in ranks:
            p = pres[q]
            if not p:
                gaps += 1
            opts.append(p)
        if gaps > w_total:
            continue

        def rec(i: int, wleft: int, acc: tuple) -> None:
            if i == 5:
                wu = w_total - wleft
                out.append((_STRAIGHT, key, _merge_multi(acc, wild, wu)))
                return
            for cid in opts[i]:
                rec(i + 1, wleft, acc + (cid,))
            if wleft:
                rec(i + 1, wleft - 1, acc)

        rec(0, w_total, ())


def _gen_straight_flushes(h: _Hand, out: list, min_key: int = -1) -> None:
    # Wilds keep their physical heart suit, so only heart straight flushes
    # can lean on them; other suits need all five naturals.
    sigs = h.sigs
    wild = h.wild_cid
    w_total = h.w
    for key, ranks in _WINDOWS[5]:
        if key <= min_key:
            continue
        for suit in range(4):
            base = suit * 13
            if suit != HEART:
                if all(sigs[q][suit] for q in ranks):
                    out.append((_STRAIGHT_FLUSH, key,
                                tuple(sorted(base + q for q in ranks))))
                continue
            missing = sum(1 for q in ranks if not sigs[q][HEART])
            if missing > w_total:
                continue

            def rec(i: int, wleft: int, acc: tuple) -> None:
                if i == 5:
                    wu = w_total - wleft
                    out.append((_STRAIGHT_FLUSH, key, _merge_multi(acc, wild, wu)))
                    return
                q = ranks[i]
                if sigs[q][HEART]:
                    rec(i + 1, wleft, acc + (base + q,))
                if wleft:
                    rec(i + 1, wleft - 1, acc)

            rec(0, w_total, ())


def _gen_seq_groups(h: _Hand, out: list, ctype: int, length: int, group: int,
                    min_key: int = -1) -> None:
    """Tubes (three consecutive pairs) and plates (two consecutive triples)."""
    wild = h.wild_cid
    w_total = h.w
    opts = h.group_opts(group)
    nat = h.nat
    pure_wild_ok = group == 2 and w_total >= 2
    for key, ranks in _WINDOWS[length]:
        if key <= min_key:
            continue
        deficit = sum(max(0, group - nat[q]) for q in ranks)
        if deficit > w_total:
            continue

        def rec(i: int, wleft: int, acc: tuple) -> None:
            if i == length:
                wu = w_total - wleft
                out.append((ctype, key, _merge_multi(acc, wild, wu)))
                return
            q = ranks[i]
            for nats, wu in opts[q]:
                if wu <= wleft:
                    rec(i + 1, wleft - wu, acc + nats)
            if pure_wild_ok and wleft >= 2:
                rec(i + 1, wleft - 2, acc)

        rec(0, w_total, ())


# ---------------------------------------------------------------------------
# Beat relation.
# ---------------------------------------------------------------------------

def _bomb_class(ctype: int, size: int) -> int:
    # 4-bomb < 5-bomb < straight flush < 6-bomb < ... < 8-bomb < joker bomb
    if ctype == _JOKER_BOMB:
        return 100
    if ctype == _STRAIGHT_FLUSH:
        return 11
    return 2 * size


_ELEVATED_KEY_TYPES = frozenset((_SINGLE, _PAIR, _TRIPLE, _FULL_HOUSE))


def _beats(challenger: ActionTuple, incumbent: ActionTuple, level: int) -> bool:
    tc, kc, cc = challenger
    ti, ki, ci = incumbent
    if tc == _PASS or ti == _PASS:
        raise ValueError("beats is undefined for Pass")
    c_bomb = tc >= _BOMB
    i_bomb = ti >= _BOMB
    if c_bomb:
        if not i_bomb:
            return True
        bc = _bomb_class(tc, len(cc))
        bi = _bomb_class(ti, len(ci))
        if bc != bi:
            return bc > bi
        if tc == _JOKER_BOMB:
            return False
        if tc == _STRAIGHT_FLUSH:
            return kc > ki
        row = ELEVATED_VALUE[level]
        return row[kc] > row[ki]
    if i_bomb:
        return False
    if tc != ti:
        return False
    if tc in _ELEVATED_KEY_TYPES:
        row = ELEVATED_VALUE[level]
        return row[kc] > row[ki]
    return kc > ki  # sequence keys compare in natural order


def beats(challenger, incumbent, level: int) -> bool:
    """True iff ``challenger`` may legally be played over ``incumbent``."""
    return _beats(_as_tuple(challenger), _as_tuple(incumbent), level)


def _as_tuple(action) -> ActionTuple:
    if isinstance(action, Combination):
        return action.as_tuple()
    return action


# ---------------------------------------------------------------------------
# Legal play generation.
# ---------------------------------------------------------------------------

def generate_legal_plays(counts: Sequence[int], incumbent: Optional[ActionTuple],
                         level: int) -> list[ActionTuple]:
    """Internal fast path: canonical sorted action list over a 54-count hand.

    Leading (no incumbent) enumerates every formable combination and excludes
    Pass; following returns Pass first plus every beating combination.
    """
    h = _Hand(counts, level)
    out: list[ActionTuple] = []
    if incumbent is None:
        _gen_singles(h, out)
        _gen_pairs(h, out)
        _gen_triples(h, out)
        _gen_seq_groups(h, out, _TUBE, 3, 2)
        _gen_seq_groups(h, out, _PLATE, 2, 3)
        _gen_full_houses(h, out)
        _gen_straights(h, out)
        _gen_bombs(h, out)
        _gen_straight_flushes(h, out)
        _gen_joker_bomb(h, out)
        out.sort()
        return out

    ti, ki, ci = incumbent
    if ti == _JOKER_BOMB:
        return [PASS_TUPLE]
    elev = h.elev
    if ti == _BOMB:
        size = len(ci)
        _gen_bombs(h, out, exact_size=size, min_elev=elev[ki])
        if size < 8:
            _gen_bombs(h, out, min_size=size + 1)
        if size <= 5:
            _gen_straight_flushes(h, out)
    elif ti == _STRAIGHT_FLUSH:
        _gen_straight_flushes(h, out, min_key=ki)
        _gen_bombs(h, out, min_size=6)
    else:
        if ti == _SINGLE:
            _gen_singles(h, out, min_elev=elev[ki])
        elif ti == _PAIR:
            _gen_pairs(h, out, min_elev=elev[ki])
        elif ti == _TRIPLE:
            _gen_triples(h, out, min_elev=elev[ki])
        elif ti == _TUBE:
            _gen_seq_groups(h, out, _TUBE, 3, 2, min_key=ki)
        elif ti == _PLATE:
            _gen_seq_groups(h, out, _PLATE, 2, 3, min_key=ki)
        elif ti == _FULL_HOUSE:
            _gen_full_houses(h, out, min_elev=elev[ki])
        elif ti == _STRAIGHT:
            _gen_straights(h, out, min_key=ki)
        _gen_bombs(h, out)
        _gen_straight_flushes(h, out)
    _gen_joker_bomb(h, out)
    out.sort()
    out.insert(0, PASS_TUPLE)
    return out


def _counts_from_cards(cards: Iterable[int]) -> list[int]:
    counts = [0] * NUM_CARD_KINDS
    for cid in cards:
        counts[cid] += 1
    return counts


def resolve_wild_ranks(action: ActionTuple, level: int) -> tuple[int, ...]:
    """One valid assignment of ranks to the wild cards inside an action."""
    ctype, key, cards = action
    wild_cid = 13 + level
    n_wild = sum(1 for c in cards if c == wild_cid)
    if not n_wild or ctype == _SINGLE or ctype == _PASS:
        return ()
    if ctype in (_PAIR, _TRIPLE, _BOMB):
        return (key,) * n_wild
    nat_counts = [0] * 15
    for c in cards:
        if c != wild_cid:
            nat_counts[card_rank(c)] += 1
    if ctype == _FULL_HOUSE:
        w_triple = 3 - nat_counts[key]
        pair_rank = next((r for r in range(15) if r != key and nat_counts[r]), None)
        if pair_rank is None:
            pair_rank = 0 if key != 0 else 1
        w_pair = n_wild - w_triple
        return tuple(sorted((key,) * w_triple + (pair_rank,) * w_pair))
    length = 5 if ctype in (_STRAIGHT, _STRAIGHT_FLUSH) else (3 if ctype == _TUBE else 2)
    group = 1 if length == 5 else (2 if length == 3 else 3)
    assigned = []
    for q in _window_ranks(length, key):
        assigned.extend([q] * (group - nat_counts[q]))
    return tuple(sorted(assigned))


def _wrap(action: ActionTuple, level: int) -> Combination:
    ctype, key, cards = action
    if ctype == _PASS:
        return PASS_COMBINATION
    return Combination(CombinationType(ctype), key, cards,
                       resolve_wild_ranks(action, level))


def legal_plays(hand: Iterable[int], incumbent=None, level: int = 0) -> list[Combination]:
    """Every legal action for ``hand``: the full formable set when leading,
    or Pass plus every combination beating ``incumbent`` when following."""
    counts = _counts_from_cards(hand)
    n = sum(counts)
    if n == 0:
        raise ValueError("empty hand")
    if n > 27:
        raise ValueError("hand larger than 27 cards")
    inc = _as_tuple(incumbent) if incumbent is not None else None
    return [_wrap(a, level) for a in generate_legal_plays(counts, inc, level)]


# ---------------------------------------------------------------------------
# Classification of an exact multiset.
# ---------------------------------------------------------------------------

def _structural(ranks: list[int], suits: list[int]) -> list[tuple[int, int]]:
    """All (ctype, key) shapes satisfied by an exact (rank, suit) multiset of
    size 2..8. Jokers never join sequences; mixed jokers never pair."""
    n = len(ranks)
    found: list[tuple[int, int]] = []
    order = sorted(range(n), key=ranks.__getitem__)
    sranks = [ranks[i] for i in order]
    first, last = sranks[0], sranks[-1]
    if first == last:
        if n == 2:
            found.append((_PAIR, first))
        elif n == 3 and first <= RANK_A:
            found.append((_TRIPLE, first))
        elif 4 <= n <= 8 and first <= RANK_A:
            found.append((_BOMB, first))
        return found
    if n == 4 and sranks == [BLACK_JOKER, BLACK_JOKER, RED_JOKER, RED_JOKER]:
        found.append((_JOKER_BOMB, RED_JOKER))
        return found
    if last > RANK_A:
        if n == 5:
            # a same-joker pair may serve as the pair of a full house
            rank_counts: dict[int, int] = {}
            for r in sranks:
                rank_counts[r] = rank_counts.get(r, 0) + 1
            if len(rank_counts) == 2:
                (r1, c1), (r2, c2) = rank_counts.items()
                if c1 == 3 and c2 == 2 and r1 <= RANK_A:
                    found.append((_FULL_HOUSE, r1))
                elif c2 == 3 and c1 == 2 and r2 <= RANK_A:
                    found.append((_FULL_HOUSE, r2))
        return found
    distinct = sorted(set(sranks))
    if n == 5:
        rank_counts = {}
        for r in sranks:
            rank_counts[r] = rank_counts.get(r, 0) + 1
        if len(rank_counts) == 2:
            for r, c in rank_counts.items():
                if c == 3:
                    found.append((_FULL_HOUSE, r))
        if len(distinct) == 5:
            key = _consecutive_key(distinct)
            if key is not None:
                found.append((_STRAIGHT, key))
                if len(set(suits)) == 1:
                    found.append((_STRAIGHT_FLUSH, key))
    elif n == 6:
        if len(distinct) == 3 and all(sranks.count(r) == 2 for r in distinct):
            key = _consecutive_key(distinct)
            if key is not None:
                found.append((_TUBE, key))
        if len(distinct) == 2 and all(sranks.count(r) == 3 for r in distinct):
            key = _consecutive_key(distinct)
            if key is not None:
                found.append((_PLATE, key))
    return found


def _consecutive_key(distinct: list[int]) -> Optional[int]:
    """Key of a natural run, allowing A below 2; None if not consecutive."""
    m = len(distinct)
    if distinct[-1] - distinct[0] == m - 1:
        return distinct[-1]
    if distinct[-1] == RANK_A and distinct[:-1] == list(range(m - 1)):
        return m - 2
    return None


def classify(cards: Iterable[int], level: int) -> set[Combination]:
    """Every interpretation of the exact multiset: distinct (type, key,
    wild ranks) triples. Uninterpretable input yields the empty set."""
    cards = tuple(sorted(cards))
    n = len(cards)
    if not 1 <= n <= 8:
        raise ValueError("classify accepts 1..8 cards")
    if n == 1:
        # a lone wild is played as the plain heart level card
        return {Combination(CombinationType.SINGLE, card_rank(cards[0]), cards)}
    wild_cid = 13 + level
    naturals = [c for c in cards if c != wild_cid]
    n_wild = n - len(naturals)
    nat_ranks = [card_rank(c) for c in naturals]
    nat_suits = [card_suit(c) for c in naturals]
    seen: set[tuple[int, int, tuple[int, ...]]] = set()
    for assignment in product(range(13), repeat=n_wild):
        ranks = nat_ranks + list(assignment)
        suits = nat_suits + [HEART] * n_wild
        key_ranks = tuple(sorted(assignment))
        for ctype, key in _structural(ranks, suits):
            seen.add((ctype, key, key_ranks))
    return {Combination(CombinationType(t), k, cards, wr) for t, k, wr in seen}


# ---------------------------------------------------------------------------
# Tribute and back-tribute generation.
# ---------------------------------------------------------------------------

def legal_tributes(hand: Iterable[int], level: int) -> list[int]:
    """All tribute choices: every distinct card of the highest elevated rank.
    The heart level cards (wilds) are exempt from tribute."""
    wild_cid = 13 + level
    elev = ELEVATED_VALUE[level]
    best = -1
    best_ids: list[int] = []
    for cid in set(hand):
        if cid == wild_cid:
            continue
        v = elev[card_rank(cid)]
        if v > best:
            best = v
            best_ids = [cid]
        elif v == best:
            best_ids.append(cid)
    if not best_ids:
        raise ValueError("no tribute-eligible card in hand")
    return sorted(best_ids)


def legal_back_tributes(hand: Iterable[int], level: int) -> list[int]:
    """All back-tribute choices: every distinct card of natural rank <= 10.
    If none exists the lowest elevated rank in hand becomes returnable so the
    phase can never dead-end."""
    eligible = {cid for cid in hand if cid < 52 and card_rank(cid) <= 8}
    if eligible:
        return sorted(eligible)
    elev = ELEVATED_VALUE[level]
    worst = min(elev[card_rank(cid)] for cid in hand)
    return sorted({cid for cid in hand if elev[card_rank(cid)] == worst})


# ---------------------------------------------------------------------------
# Wire form: [type-name, key-rank char, [card codes]]; Pass is
# ['PASS', 'PASS', 'PASS'].
# ---------------------------------------------------------------------------

def action_to_wire(action) -> list:
    t, key, cards = _as_tuple(action)
    if t == _PASS:
        return ["PASS", "PASS", "PASS"]
    return [TYPE_WIRE_NAMES[t], rank_char(key), [card_code(c) for c in cards]]


def action_from_wire(wire: Sequence) -> ActionTuple:
    if not isinstance(wire, (list, tuple)) or len(wire) != 3:
        raise ValueError(f"malformed action: {wire!r}")
    if wire[0] == "PASS":
        return PASS_TUPLE
    try:
        ctype = WIRE_NAME_TYPES[wire[0]]
        key = rank_from_char(wire[1])
        cards = tuple(sorted(card_from_code(code) for code in wire[2]))
    except (KeyError, ValueError, TypeError):
        raise ValueError(f"malformed action: {wire!r}") from None
    return (ctype, key, cards)
