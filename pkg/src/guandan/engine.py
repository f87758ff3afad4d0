"""Round and match state machines: dealing, first-lead determination, the
tribute phase, trick flow, finish-order roles, rewards, level progression,
and match termination.

Seats 0..3 play counterclockwise in increasing order; seats 0/2 and 1/3 are
teammates. Hands are 54-entry count arrays on the hot path.
"""

from __future__ import annotations

import hashlib
import json
import random
import struct
from dataclasses import dataclass, field
from enum import Enum, IntEnum
from typing import NamedTuple, Optional, Sequence

from .cards import (
    BLACK_JOKER,
    DECK_SIZE,
    NUM_CARD_KINDS,
    RANK_A,
    RED_JOKER_CARD,
    card_from_code,
    card_rank,
    card_code,
    deal,
    derive_seed,
    rank_char,
    rank_from_char,
    shuffled_deck,
)
from .combos import (
    PASS_TUPLE,
    action_from_wire,
    action_to_wire,
    generate_legal_plays,
    legal_back_tributes,
    legal_tributes,
)

RECORD_VERSION = 1


class Phase(Enum):
    TRIBUTE = "tribute"
    BACK = "back"
    PLAY = "play"
    SETTLED = "settled"


class Role(IntEnum):
    BANKER = 0
    FOLLOWER = 1
    THIRD = 2
    DWELLER = 3


class EngineError(Exception):
    pass


class OutOfTurnError(EngineError):
    pass


class IllegalActionError(EngineError):
    pass


class InvalidStateError(EngineError):
    pass


class AgentFault(EngineError):
    """An agent returned an out-of-range or malformed choice."""

    def __init__(self, seat: int, message: str):
        super().__init__(f"seat {seat}: {message}")
        self.seat = seat


class ReplayMismatch(EngineError):
    def __init__(self, step: int, message: str):
        super().__init__(f"step {step}: {message}")
        self.step = step


def team_of(seat: int) -> int:
    return seat & 1


def partner_of(seat: int) -> int:
    return seat ^ 2


class ActContext(NamedTuple):
    """What an in-process agent sees when asked to act."""

    stage: str                 # 'play' | 'tribute' | 'back'
    seat: int
    actions: list              # action tuples, or card ids in tribute stages
    level: int
    greater_action: Optional[tuple]
    hand_counts: Sequence[int]
    hand_size: int


@dataclass
class RoundResult:
    roles: tuple[Role, Role, Role, Role]        # indexed by seat
    level_delta: int                            # nominal 3/2/1
    rewards: tuple[int, int, int, int]          # indexed by seat
    match_over: bool
    banker_team: int
    finish_order: tuple[int, ...]
    zero_reward: bool


@dataclass
class MatchState:
    seed: int
    team_levels: list[int]
    round_level: int
    a_strikes: list[int]
    last_round_roles: Optional[list[Role]]
    round_index: int
    terminated: bool
    winning_team: Optional[int]


def start_match(seed: int) -> MatchState:
    """Fresh match: both teams at level 2, round level 2, nothing struck."""
    return MatchState(
        seed=seed,
        team_levels=[0, 0],
        round_level=0,
        a_strikes=[0, 0],
        last_round_roles=None,
        round_index=0,
        terminated=False,
        winning_team=None,
    )


def determine_first_leader(deck_order: Sequence[int], rng: random.Random) -> int:
    """Cut-and-reveal lead for round one.

    A random seat reveals cards from a random cut position until a non-joker
    appears, then counts counterclockwise from itself (counting as 1) by the
    card's face value (A=1, J/Q/K=11/12/13).
    """
    revealer = rng.randrange(4)
    cut = rng.randrange(DECK_SIZE)
    i = 0
    while True:
        rank = card_rank(deck_order[(cut + i) % DECK_SIZE])
        if rank < BLACK_JOKER:
            break
        i += 1
    value = 1 if rank == RANK_A else rank + 2
    return (revealer + value - 1) % 4


def tribute_targets(last_roles: Sequence[Role],
                    tribute_cards: Optional[dict[int, int]] = None,
                    level: int = 0) -> list[tuple[int, int]]:
    """Payer/receiver pairs for the tribute phase, banker pair first.

    Single-Dweller rounds pair the previous Dweller with the Banker. After a
    Double-Winner round both losers pay; routing then needs their chosen
    cards: the higher-ranked tribute goes to the Banker, the other to the
    Follower, ties broken by counterclockwise proximity to the Banker.
    """
    seats_by_role = {role: seat for seat, role in enumerate(last_roles)}
    banker = seats_by_role[Role.BANKER]
    follower = seats_by_role[Role.FOLLOWER]
    dweller = seats_by_role[Role.DWELLER]
    third = seats_by_role[Role.THIRD]
    if team_of(banker) != team_of(follower):
        return [(dweller, banker)]
    payers = sorted((third, dweller), key=lambda s: (s - banker) % 4)
    if tribute_cards is None:
        raise ValueError("double-winner routing requires the tribute cards")
    from .cards import ELEVATED_VALUE

    row = ELEVATED_VALUE[level]
    payers.sort(key=lambda s: (-row[card_rank(tribute_cards[s])], (s - banker) % 4))
    return [(payers[0], banker), (payers[1], follower)]


def _tribute_payers(last_roles: Sequence[Role]) -> tuple[list[int], int]:
    """Ordered payer seats (counterclockwise from the Banker) and the Banker."""
    seats_by_role = {role: seat for seat, role in enumerate(last_roles)}
    banker = seats_by_role[Role.BANKER]
    follower = seats_by_role[Role.FOLLOWER]
    dweller = seats_by_role[Role.DWELLER]
    third = seats_by_role[Role.THIRD]
    if team_of(banker) == team_of(follower):
        payers = sorted((third, dweller), key=lambda s: (s - banker) % 4)
    else:
        payers = [dweller]
    return payers, banker


class RoundState:
    """Mutable state of one round; advanced exclusively by apply_action."""

    __slots__ = (
        "level", "round_index", "hands", "hand_sizes", "phase", "current_seat",
        "greater_seat", "greater_action", "finish_order", "history",
        "tribute_ledger", "played_counts", "played_total", "last_action",
        "last_actor", "first_leader", "anti_info", "_payers", "_banker",
        "_last_roles", "_tribute_choices", "_pairings", "_back_pending",
        "_lead_after", "_in_transit", "_step", "_legal_cache",
    )

    def __init__(self, level: int, hands: Sequence[Sequence[int]], round_index: int):
        self.level = level
        self.round_index = round_index
        self.hands = [list(h) for h in hands]
        self.hand_sizes = [sum(h) for h in self.hands]
        self.phase = Phase.PLAY
        self.current_seat: Optional[int] = None
        self.greater_seat: Optional[int] = None
        self.greater_action = None
        self.finish_order: list[int] = []
        self.history: list[tuple[int, tuple]] = []
        self.tribute_ledger: list[tuple[str, int, int, int]] = []
        self.played_counts = [[0] * NUM_CARD_KINDS for _ in range(4)]
        self.played_total = 0
        self.last_action: list[Optional[tuple]] = [None] * 4
        self.last_actor: Optional[int] = None
        self.first_leader: Optional[int] = None
        self.anti_info: Optional[tuple[int, list[int]]] = None
        self._payers: list[int] = []
        self._banker: Optional[int] = None
        self._last_roles: Optional[list[Role]] = None
        self._tribute_choices: dict[int, int] = {}
        self._pairings: list[tuple[int, int]] = []
        self._back_pending: list[int] = []
        self._lead_after: Optional[int] = None
        self._in_transit: list[int] = []
        self._step = 0
        self._legal_cache: tuple[int, list] = (-1, [])

    # -- queries ------------------------------------------------------------

    def hand_cards(self, seat: int) -> tuple[int, ...]:
        counts = self.hands[seat]
        return tuple(cid for cid in range(NUM_CARD_KINDS) for _ in range(counts[cid]))

    def finished(self, seat: int) -> bool:
        return self.hand_sizes[seat] == 0

    def legal_actions(self) -> list:
        """Legal choices for the seat to act, cached per step."""
        step, cached = self._legal_cache
        if step == self._step:
            return cached
        seat = self.current_seat
        if seat is None or self.phase is Phase.SETTLED:
            raise InvalidStateError("round is settled")
        if self.phase is Phase.PLAY:
            actions = generate_legal_plays(self.hands[seat], self.greater_action, self.level)
        elif self.phase is Phase.TRIBUTE:
            actions = legal_tributes(self.hand_cards(seat), self.level)
        else:
            actions = legal_back_tributes(self.hand_cards(seat), self.level)
        self._legal_cache = (self._step, actions)
        return actions

    def back_context(self, seat: int) -> tuple[int, int]:
        """(payer seat, tribute card) the back-tributing receiver responds to."""
        for payer, receiver in self._pairings:
            if receiver == seat:
                return payer, self._tribute_choices[payer]
        raise InvalidStateError(f"seat {seat} owes no back-tribute")

    def state_hash(self) -> str:
        h = hashlib.blake2b(digest_size=16)
        h.update(bytes(self.hand_sizes))
        for hand in self.hands:
            h.update(bytes(hand))
        h.update(self.phase.value.encode())
        h.update(struct.pack(
            "<bbbbh",
            -1 if self.current_seat is None else self.current_seat,
            -1 if self.greater_seat is None else self.greater_seat,
            self.level,
            len(self.finish_order),
            len(self.history),
        ))
        h.update(repr(self.greater_action).encode())
        h.update(bytes(self.finish_order))
        h.update(repr(self.tribute_ledger).encode())
        return h.hexdigest()

    # -- invariants (fuzz support) -------------------------------------------

    def check_conservation(self, full: bool = False) -> None:
        total = sum(self.hand_sizes) + self.played_total + len(self._in_transit)
        if total != DECK_SIZE:
            raise AssertionError(f"card conservation broken: {total} != 108")
        if full:
            counts = [0] * NUM_CARD_KINDS
            for hand in self.hands:
                for cid in range(NUM_CARD_KINDS):
                    counts[cid] += hand[cid]
            for seat in range(4):
                for cid in range(NUM_CARD_KINDS):
                    counts[cid] += self.played_counts[seat][cid]
            for cid in self._in_transit:
                counts[cid] += 1
            if any(c != 2 for c in counts):
                raise AssertionError("card multiset no longer two of each kind")

    # -- transitions ----------------------------------------------------------

    def apply_action(self, seat: int, action):
        """Validate and apply one action; returns broadcast events."""
        if self.phase is Phase.SETTLED:
            raise InvalidStateError("round is settled")
        if seat != self.current_seat:
            raise OutOfTurnError(f"seat {seat} acted; seat {self.current_seat} expected")
        legal = self.legal_actions()
        if action not in legal:
            raise IllegalActionError(f"action {action!r} not legal for seat {seat}")
        self._step += 1
        if self.phase is Phase.PLAY:
            return self._apply_play(seat, action)
        if self.phase is Phase.TRIBUTE:
            return self._apply_tribute(seat, action)
        return self._apply_back(seat, action)

    def _apply_play(self, seat: int, action) -> list:
        events = []
        ctype = action[0]
        if ctype != PASS_TUPLE[0]:
            hand = self.hands[seat]
            played = self.played_counts[seat]
            for cid in action[2]:
                hand[cid] -= 1
                if hand[cid] < 0:
                    raise IllegalActionError("card not in hand")
                played[cid] += 1
            n = len(action[2])
            self.hand_sizes[seat] -= n
            self.played_total += n
            self.greater_seat = seat
            self.greater_action = action
        self.history.append((seat, action))
        self.last_action[seat] = action
        self.last_actor = seat
        events.append(("play", seat, action, self.greater_seat, self.greater_action))
        if self.hand_sizes[seat] == 0 and seat not in self.finish_order:
            self.finish_order.append(seat)
        if self._round_over():
            self.phase = Phase.SETTLED
            self.current_seat = None
            events.append(("round_over",))
        else:
            self._advance(seat)
        return events

    def _round_over(self) -> bool:
        order = self.finish_order
        if len(order) >= 3:
            if len(order) == 3:
                order.append(next(s for s in range(4) if s not in order))
            return True
        if len(order) == 2 and team_of(order[0]) == team_of(order[1]):
            # double win ends the round early; remaining roles are fixed by
            # card count, ties by counterclockwise proximity to the banker
            banker = order[0]
            rest = [s for s in range(4) if s not in order]
            rest.sort(key=lambda s: (self.hand_sizes[s], (s - banker) % 4))
            order.extend(rest)
            return True
        return False

    def _advance(self, seat: int) -> None:
        greater = self.greater_seat
        for step in (1, 2, 3):
            s = (seat + step) & 3
            if s == greater:
                self._close_trick()
                return
            if self.hand_sizes[s]:
                self.current_seat = s
                return
        raise InvalidStateError("no seat can act")  # pragma: no cover

    def _close_trick(self) -> None:
        winner = self.greater_seat
        self.greater_seat = None
        self.greater_action = None
        if self.hand_sizes[winner]:
            self.current_seat = winner
            return
        mate = partner_of(winner)
        if self.hand_sizes[mate]:
            self.current_seat = mate
            return
        for step in (1, 2, 3):
            s = (winner + step) & 3
            if self.hand_sizes[s]:
                self.current_seat = s
                return
        raise InvalidStateError("no seat can lead")  # pragma: no cover

    def _apply_tribute(self, seat: int, cid: int) -> list:
        hand = self.hands[seat]
        hand[cid] -= 1
        self.hand_sizes[seat] -= 1
        self._in_transit.append(cid)
        self._tribute_choices[seat] = cid
        remaining = [p for p in self._payers if p not in self._tribute_choices]
        if remaining:
            self.current_seat = remaining[0]
            return []
        # all tributes chosen: route, transfer, open the back phase
        if len(self._payers) == 1:
            pairings = [(self._payers[0], self._banker)]
        else:
            pairings = tribute_targets(self._last_roles, self._tribute_choices, self.level)
        self._pairings = pairings
        results = []
        for payer, receiver in pairings:
            card = self._tribute_choices[payer]
            self._in_transit.remove(card)
            self.hands[receiver][card] += 1
            self.hand_sizes[receiver] += 1
            self.tribute_ledger.append(("tribute", payer, receiver, card))
            results.append((payer, receiver, card))
        self._lead_after = pairings[0][0]
        self.phase = Phase.BACK
        self._back_pending = [receiver for _, receiver in pairings]
        self.current_seat = self._back_pending[0]
        return [("tribute", tuple(results))]

    def _apply_back(self, seat: int, cid: int) -> list:
        payer, _ = self.back_context(seat)
        self.hands[seat][cid] -= 1
        self.hand_sizes[seat] -= 1
        self.hands[payer][cid] += 1
        self.hand_sizes[payer] += 1
        self.tribute_ledger.append(("back", seat, payer, cid))
        self._back_pending.remove(seat)
        if self._back_pending:
            self.current_seat = self._back_pending[0]
            return []
        results = tuple(
            (giver, receiver, card)
            for kind, giver, receiver, card in self.tribute_ledger
            if kind == "back"
        )
        self.phase = Phase.PLAY
        self.current_seat = self._lead_after
        self.first_leader = self._lead_after
        return [("back", results)]


def start_round(match: MatchState, seed: int) -> RoundState:
    """Deal a round at the current round level and open its first phase.

    Round one enters play behind the cut-determined leader; later rounds open
    the tribute phase, or skip straight to play behind the Banker when the
    losing side holds both red jokers (anti-tribute).
    """
    if match.terminated:
        raise InvalidStateError("match is terminated")
    rng = random.Random(seed)
    order = shuffled_deck(rng)
    hands_cards = deal(order)
    hands = [[0] * NUM_CARD_KINDS for _ in range(4)]
    for seat in range(4):
        for cid in hands_cards[seat]:
            hands[seat][cid] += 1
    rnd = RoundState(match.round_level, hands, match.round_index)
    if match.last_round_roles is None:
        rnd.current_seat = determine_first_leader(order, rng)
        rnd.first_leader = rnd.current_seat
        return rnd
    payers, banker = _tribute_payers(match.last_round_roles)
    rj_holders = [s for s in payers if hands[s][RED_JOKER_CARD] > 0]
    rj_total = sum(hands[s][RED_JOKER_CARD] for s in payers)
    if rj_total == 2:
        rnd.anti_info = (len(rj_holders), rj_holders)
        rnd.current_seat = banker
        rnd.first_leader = banker
        return rnd
    rnd.phase = Phase.TRIBUTE
    rnd._payers = payers
    rnd._banker = banker
    rnd._last_roles = list(match.last_round_roles)
    rnd.current_seat = payers[0]
    return rnd


def settle_round(rnd: RoundState, match: MatchState) -> RoundResult:
    """Assign roles, rewards and level progression; advance the match."""
    if rnd.phase is not Phase.SETTLED:
        raise InvalidStateError("round not finished")
    order = tuple(rnd.finish_order)
    roles_list: list[Role] = [Role.BANKER] * 4
    for pos, seat in enumerate(order):
        roles_list[seat] = Role(pos)
    roles = tuple(roles_list)
    banker = order[0]
    banker_team = team_of(banker)
    partner_role = roles[partner_of(banker)]
    delta = {Role.FOLLOWER: 3, Role.THIRD: 2, Role.DWELLER: 1}[partner_role]
    zero = rnd.level == RANK_A and partner_role is Role.DWELLER
    if zero:
        rewards = (0, 0, 0, 0)
    else:
        rewards = tuple(delta if team_of(s) == banker_team else -delta for s in range(4))
    pre_levels = list(match.team_levels)
    terminated = pre_levels[banker_team] == RANK_A and partner_role is not Role.DWELLER
    match.team_levels[banker_team] = min(RANK_A, pre_levels[banker_team] + delta)
    if terminated:
        match.terminated = True
        match.winning_team = banker_team
    else:
        dweller_team = team_of(order[3])
        if rnd.level == RANK_A and pre_levels[dweller_team] == RANK_A:
            match.a_strikes[dweller_team] += 1
            if match.a_strikes[dweller_team] >= 3:
                # three failures at its own level A: back to level 2
                match.team_levels[dweller_team] = 0
                match.a_strikes[dweller_team] = 0
    match.round_level = match.team_levels[banker_team]
    match.last_round_roles = roles_list
    match.round_index += 1
    return RoundResult(
        roles=roles,
        level_delta=delta,
        rewards=rewards,
        match_over=match.terminated,
        banker_team=banker_team,
        finish_order=order,
        zero_reward=zero,
    )


# ---------------------------------------------------------------------------
# Match loop, records, replay.
# ---------------------------------------------------------------------------

@dataclass
class MatchRecord:
    """Full log of one match: enough for bit-exact replay."""

    seed: int
    version: int = RECORD_VERSION
    steps: list = field(default_factory=list)        # (round, seat, stage, action, rest)
    round_results: list = field(default_factory=list)
    final_levels: Optional[tuple[int, int]] = None
    winning_team: Optional[int] = None
    state_hashes: Optional[list[str]] = None

    def to_jsonl(self) -> str:
        lines = [json.dumps({"type": "header", "version": self.version, "seed": self.seed})]
        for rnd_idx, seat, stage, action, rest in self.steps:
            if stage == "play":
                act = action_to_wire(action)
            elif stage == "tribute":
                act = ["tribute", "tribute", [card_code(action)]]
            else:
                act = ["back", "back", [card_code(action)]]
            lines.append(json.dumps({
                "type": "step", "round": rnd_idx, "seat": seat,
                "phase": stage, "act": act, "rest": list(rest),
            }))
        for rr in self.round_results:
            lines.append(json.dumps(rr))
        lines.append(json.dumps({
            "type": "end",
            "final_levels": [rank_char(l) for l in (self.final_levels or (0, 0))],
            "winning_team": self.winning_team,
        }))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> "MatchRecord":
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError("empty match record")
        header = json.loads(lines[0])
        if header.get("type") != "header" or "seed" not in header:
            raise ValueError("missing record header")
        rec = cls(seed=header["seed"], version=header.get("version", RECORD_VERSION))
        for line in lines[1:]:
            obj = json.loads(line)
            kind = obj.get("type")
            if kind == "step":
                stage = obj["phase"]
                if stage == "play":
                    action = action_from_wire(obj["act"])
                else:
                    action = card_from_code(obj["act"][2][0])
                rec.steps.append((obj["round"], obj["seat"], stage, action,
                                  tuple(obj["rest"])))
            elif kind == "round":
                rec.round_results.append(obj)
            elif kind == "end":
                rec.final_levels = tuple(rank_from_char(ch) for ch in obj["final_levels"])
                rec.winning_team = obj["winning_team"]
        return rec


def _round_result_line(rnd_idx: int, result: RoundResult, level: int,
                       match: MatchState) -> dict:
    return {
        "type": "round",
        "round": rnd_idx,
        "level": rank_char(level),
        "order": list(result.finish_order),
        "roles": [int(r) for r in result.roles],
        "delta": result.level_delta,
        "rewards": list(result.rewards),
        "banker_team": result.banker_team,
        "match_over": result.match_over,
        "levels": [rank_char(l) for l in match.team_levels],
        "strikes": list(match.a_strikes),
    }


def run_match(agents: Sequence, seed: int, *, max_steps: int = 1_000_000,
              collect_state_hashes: bool = False, validate: bool = False) -> MatchRecord:
    """Run a full match under four agents; abort with AgentFault on a bad
    index. Fully deterministic given the seed and deterministic agents."""
    match = start_match(seed)
    record = MatchRecord(seed=seed)
    if collect_state_hashes:
        record.state_hashes = []
    steps = 0
    while not match.terminated:
        rnd_idx = match.round_index
        rnd = start_round(match, derive_seed(seed, "round", rnd_idx))
        while rnd.phase is not Phase.SETTLED:
            seat = rnd.current_seat
            actions = rnd.legal_actions()
            stage = rnd.phase.value if rnd.phase is not Phase.PLAY else "play"
            ctx = ActContext(stage, seat, actions, rnd.level, rnd.greater_action,
                             rnd.hands[seat], rnd.hand_sizes[seat])
            choice = agents[seat].act(ctx)
            if not isinstance(choice, int) or not 0 <= choice < len(actions):
                raise AgentFault(seat, f"chose {choice!r} of {len(actions)} actions")
            action = actions[choice]
            rnd.apply_action(seat, action)
            record.steps.append((rnd_idx, seat, stage, action, tuple(rnd.hand_sizes)))
            if collect_state_hashes:
                record.state_hashes.append(rnd.state_hash())
            if validate:
                rnd.check_conservation()
            steps += 1
            if steps > max_steps:
                raise InvalidStateError("per-match step ceiling exceeded")
        if validate:
            rnd.check_conservation(full=True)
        result = settle_round(rnd, match)
        record.round_results.append(_round_result_line(rnd_idx, result, rnd.level, match))
    record.final_levels = (match.team_levels[0], match.team_levels[1])
    record.winning_team = match.winning_team
    return record


def replay_match(record: MatchRecord, *, collect_state_hashes: bool = False) -> MatchRecord:
    """Re-execute a record, re-deriving legality at every step.

    Raises ReplayMismatch at the first divergence (wrong seat, an action not
    in the re-derived legal set, or hand sizes that disagree).
    """
    match = start_match(record.seed)
    out = MatchRecord(seed=record.seed)
    if collect_state_hashes:
        out.state_hashes = []
    idx = 0
    total = len(record.steps)
    while not match.terminated and idx < total:
        rnd_idx = match.round_index
        rnd = start_round(match, derive_seed(record.seed, "round", rnd_idx))
        while rnd.phase is not Phase.SETTLED:
            if idx >= total:
                raise ReplayMismatch(idx, "record ended mid-round")
            rec_round, rec_seat, rec_stage, rec_action, rec_rest = record.steps[idx]
            seat = rnd.current_seat
            stage = rnd.phase.value if rnd.phase is not Phase.PLAY else "play"
            if rec_round != rnd_idx or rec_seat != seat or rec_stage != stage:
                raise ReplayMismatch(idx, f"expected {(rnd_idx, seat, stage)}, "
                                          f"recorded {(rec_round, rec_seat, rec_stage)}")
            actions = rnd.legal_actions()
            if rec_action not in actions:
                raise ReplayMismatch(idx, "recorded action not in legal set")
            rnd.apply_action(seat, rec_action)
            if tuple(rnd.hand_sizes) != tuple(rec_rest):
                raise ReplayMismatch(idx, "hand sizes diverged")
            out.steps.append((rnd_idx, seat, stage, rec_action, tuple(rnd.hand_sizes)))
            if collect_state_hashes:
                out.state_hashes.append(rnd.state_hash())
            idx += 1
        result = settle_round(rnd, match)
        out.round_results.append(_round_result_line(rnd_idx, result, rnd.level, match))
    if idx != total:
        raise ReplayMismatch(idx, "record has trailing steps")
    if not match.terminated:
        raise ReplayMismatch(idx, "record ends before match termination")
    out.final_levels = (match.team_levels[0], match.team_levels[1])
    out.winning_team = match.winning_team
    if record.final_levels is not None and record.final_levels != out.final_levels:
        raise ReplayMismatch(idx, "final levels diverged")
    return out
