"""Brute-force reference implementations for the combination rules.

Everything here is deliberately naive and independent of the production
generators: subsets are enumerated exhaustively, wild assignments by full
cartesian product, shapes by first-principles checks over (rank, suit)
multisets, and the beat relation by an explicit ladder. Slow but obviously
faithful to the rules.
"""

from collections import Counter
from itertools import combinations, product

from guandan.cards import card_rank, card_suit

SINGLE, PAIR, TRIPLE, TUBE, PLATE, FULL_HOUSE, STRAIGHT = 0, 1, 2, 3, 4, 5, 6
BOMB, STRAIGHT_FLUSH, JOKER_BOMB = 7, 8, 9
BJ, RJ = 13, 14
HEART = 1

# rank runs, A usable low or high, jokers never included
def _runs(length):
    runs = [[12] + list(range(length - 1))]
    for start in range(0, 13 - length + 1):
        runs.append(list(range(start, start + length)))
    return runs

_STRAIGHT_RUNS = _runs(5)
_TUBE_RUNS = _runs(3)
_PLATE_RUNS = _runs(2)


def _run_key(run):
    # the window top; for the A-low run that is the last natural rank
    return run[-1]


def elevated_order(rank, level):
    """Single/pair/triple/bomb ladder with the level rank above A."""
    if rank == RJ:
        return 100
    if rank == BJ:
        return 99
    if rank == level:
        return 98
    return rank  # 0..12 natural, level removed from its slot below 98


def shapes(pairs):
    """All (ctype, key) matched by an exact (rank, suit) multiset, size 2..8."""
    ranks = sorted(r for r, _ in pairs)
    suits = [s for _, s in pairs]
    n = len(ranks)
    counts = Counter(ranks)
    out = []
    if n == 2 and len(counts) == 1:
        out.append((PAIR, ranks[0]))
    if n == 3 and len(counts) == 1 and ranks[0] < BJ:
        out.append((TRIPLE, ranks[0]))
    if 4 <= n <= 8 and len(counts) == 1 and ranks[0] < BJ:
        out.append((BOMB, ranks[0]))
    if n == 4 and counts.get(BJ) == 2 and counts.get(RJ) == 2:
        out.append((JOKER_BOMB, RJ))
    if n == 5 and sorted(counts.values()) == [2, 3]:
        triple_rank = next(r for r, c in counts.items() if c == 3)
        # the triple must be a real rank; the pair may be two equal jokers
        if triple_rank < BJ:
            out.append((FULL_HOUSE, triple_rank))
    if n == 5 and len(counts) == 5 and ranks[-1] < BJ:
        for run in _STRAIGHT_RUNS:
            if sorted(run) == ranks:
                out.append((STRAIGHT, _run_key(run)))
                if len(set(suits)) == 1:
                    out.append((STRAIGHT_FLUSH, _run_key(run)))
    if n == 6 and len(counts) == 3 and set(counts.values()) == {2} and ranks[-1] < BJ:
        for run in _TUBE_RUNS:
            if sorted(run) == sorted(counts):
                out.append((TUBE, _run_key(run)))
    if n == 6 and len(counts) == 2 and set(counts.values()) == {3} and ranks[-1] < BJ:
        for run in _PLATE_RUNS:
            if sorted(run) == sorted(counts):
                out.append((PLATE, _run_key(run)))
    return out


def oracle_classify(cards, level):
    """Set of (ctype, key, wild-ranks) interpretations of an exact multiset."""
    cards = tuple(sorted(cards))
    if len(cards) == 1:
        return {(SINGLE, card_rank(cards[0]), ())}
    wild = 13 + level
    naturals = [c for c in cards if c != wild]
    n_wild = len(cards) - len(naturals)
    base = [(card_rank(c), card_suit(c)) for c in naturals]
    out = set()
    for assign in product(range(13), repeat=n_wild):
        pairs = base + [(r, HEART) for r in assign]
        for ctype, key in shapes(pairs):
            out.add((ctype, key, tuple(sorted(assign))))
    return out


def _bomb_ladder(ctype, size):
    if ctype == JOKER_BOMB:
        return 1000
    if ctype == STRAIGHT_FLUSH:
        return 55  # between the 5-card and 6-card bombs
    return size * 10


def oracle_beats(challenger, incumbent, level):
    tc, kc, cc = challenger
    ti, ki, ci = incumbent
    c_is_bomb = tc in (BOMB, STRAIGHT_FLUSH, JOKER_BOMB)
    i_is_bomb = ti in (BOMB, STRAIGHT_FLUSH, JOKER_BOMB)
    if c_is_bomb and not i_is_bomb:
        return True
    if not c_is_bomb and i_is_bomb:
        return False
    if c_is_bomb:
        lc, li = _bomb_ladder(tc, len(cc)), _bomb_ladder(ti, len(ci))
        if lc != li:
            return lc > li
        if tc == JOKER_BOMB:
            return False
        if tc == STRAIGHT_FLUSH:
            return kc > ki
        return elevated_order(kc, level) > elevated_order(ki, level)
    if tc != ti or len(cc) != len(ci):
        return False
    if tc in (SINGLE, PAIR, TRIPLE, FULL_HOUSE):
        return elevated_order(kc, level) > elevated_order(ki, level)
    return kc > ki


def oracle_legal_plays(hand, incumbent, level):
    """Every playable (ctype, key, cards) from the hand; filtered by the beat
    relation when an incumbent is given. Pass is not included."""
    hand = tuple(hand)
    actions = set()
    seen = set()
    for k in range(1, min(8, len(hand)) + 1):
        for idxs in combinations(range(len(hand)), k):
            subset = tuple(sorted(hand[i] for i in idxs))
            if subset in seen:
                continue
            seen.add(subset)
            for ctype, key, _ in oracle_classify(subset, level):
                actions.add((ctype, key, subset))
    if incumbent is not None:
        actions = {a for a in actions if oracle_beats(a, incumbent, level)}
    return actions
