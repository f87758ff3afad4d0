"""Transport-free room logic.

A :class:`Hall` owns rooms and maps opaque connection handles to seats; it
consumes one client message at a time and returns the (connection, message)
pairs to deliver. All engine stepping for a room happens inside these calls,
so any transport that serializes calls per room keeps per-room ordering.
"""

from __future__ import annotations

import random
from typing import Any, Hashable, Optional

from ..cards import card_code, derive_seed, sort_key
from ..engine import (
    MatchState,
    Phase,
    RoundState,
    settle_round,
    start_match,
    start_round,
    team_of,
)
from . import messages as m

Conn = Hashable
Out = list[tuple[Conn, dict]]


class Room:
    def __init__(self, room_id: int, setting_times: int, seed: int):
        self.room_id = room_id
        self.setting_times = setting_times
        self.seed = seed
        self.cur_times = 0           # completed matches
        self.match_index = 0
        self.seats: list[Optional[Conn]] = [None] * 4
        self.user_ids: list[Any] = [None] * 4
        self.match: Optional[MatchState] = None
        self.round: Optional[RoundState] = None
        self.awaiting: Optional[tuple[int, str, list, list]] = None
        self.finished = False

    # -- helpers --------------------------------------------------------------

    def occupied(self, seat: int) -> bool:
        return self.seats[seat] is not None

    def full(self) -> bool:
        return all(c is not None for c in self.seats)

    def broadcast(self, msg: dict) -> Out:
        return [(conn, msg) for conn in self.seats if conn is not None]

    def to_seat(self, seat: int, msg: dict) -> Out:
        conn = self.seats[seat]
        return [(conn, msg)] if conn is not None else []

    @property
    def awaiting_seat(self) -> Optional[int]:
        return self.awaiting[0] if self.awaiting else None

    # -- match/round lifecycle -------------------------------------------------

    def begin_match(self) -> Out:
        self.match = start_match(derive_seed(self.seed, "match", self.match_index))
        self.match_index += 1
        return self.begin_round()

    def begin_round(self) -> Out:
        match = self.match
        rnd = start_round(match, derive_seed(match.seed, "round", match.round_index))
        self.round = rnd
        out: Out = []
        key = sort_key(rnd.level)
        for seat in range(4):
            codes = [card_code(c) for c in sorted(rnd.hand_cards(seat), key=key)]
            out += self.to_seat(seat, m.beginning(codes, seat))
        if rnd.anti_info is not None:
            count, holders = rnd.anti_info
            out += self.broadcast(m.anti_tribute_notify(count, holders))
        out += self.issue_request()
        return out

    def issue_request(self) -> Out:
        rnd = self.round
        seat = rnd.current_seat
        stage = rnd.phase.value if rnd.phase is not Phase.PLAY else "play"
        internal = rnd.legal_actions()
        level = rnd.level
        hand_codes = m.sorted_codes(rnd.hand_cards(seat), level)
        self_rank = self.match.team_levels[team_of(seat)]
        oppo_rank = self.match.team_levels[1 - team_of(seat)]
        if stage == "play":
            wire = [m.play_wire(a) for a in internal]
            last = rnd.last_actor
            cur_action = m.play_wire(rnd.last_action[last]) if last is not None else None
            greater = m.play_wire(rnd.greater_action) if rnd.greater_action else None
            req = m.play_request(hand_codes, list(rnd.hand_sizes), self_rank,
                                 oppo_rank, level, last, cur_action, greater,
                                 rnd.greater_seat, wire)
        elif stage == "tribute":
            wire = [m.tribute_wire(c) for c in internal]
            req = m.tribute_request(hand_codes, self_rank, oppo_rank, level, wire)
        else:
            wire = [m.back_wire(c) for c in internal]
            payer, card = rnd.back_context(seat)
            req = m.back_request(hand_codes, self_rank, oppo_rank, level,
                                 payer, card, wire)
        self.awaiting = (seat, stage, wire, internal)
        return self.to_seat(seat, req)

    def on_act(self, seat: int, stage: str, act: Any) -> tuple[Out, Optional[dict]]:
        """Apply a client action; returns (outputs, error-or-None)."""
        if self.awaiting is None:
            return [], m.error("wrong-stage", "no action is awaited")
        want_seat, want_stage, wire, internal = self.awaiting
        if seat != want_seat:
            return [], m.error("out-of-turn", f"seat {want_seat} is to act")
        if stage != want_stage:
            return [], m.error("wrong-stage", f"stage is {want_stage!r}")
        try:
            idx = wire.index(act)
        except ValueError:
            return [], m.error("illegal-action", "act not in the issued actionList")
        rnd = self.round
        events = rnd.apply_action(seat, internal[idx])
        self.awaiting = None
        out: Out = []
        round_over = False
        for ev in events:
            kind = ev[0]
            if kind == "play":
                _, s, action, gseat, gaction = ev
                out += self.broadcast(m.play_notify(
                    s, m.play_wire(action), gseat,
                    m.play_wire(gaction) if gaction is not None else None))
            elif kind == "tribute":
                out += self.broadcast(m.tribute_notify(ev[1]))
            elif kind == "back":
                out += self.broadcast(m.back_notify(ev[1]))
            elif kind == "round_over":
                round_over = True
        if round_over:
            out += self._finish_round()
        else:
            out += self.issue_request()
        return out, None

    def _finish_round(self) -> Out:
        rnd = self.round
        match = self.match
        rest = [(s, m.sorted_codes(rnd.hand_cards(s), rnd.level))
                for s in range(4) if rnd.hand_sizes[s] > 0]
        out = self.broadcast(m.episode_over(rnd.finish_order, rnd.level, rest))
        settle_round(rnd, match)
        if not match.terminated:
            return out + self.begin_round()
        self.cur_times += 1
        out += self.broadcast(m.game_over(self.cur_times, self.setting_times))
        winner = match.winning_team
        out += self.broadcast(m.game_result(
            winner, match.team_levels[winner], match.team_levels[1 - winner]))
        if self.cur_times < self.setting_times:
            out += self.begin_match()
        else:
            self.finished = True
        return out


class Hall:
    """Owns rooms; one handle() call per inbound client message."""

    def __init__(self, max_rooms: int = 64, seed: Optional[int] = None):
        self.max_rooms = max_rooms
        self.seed = seed if seed is not None else random.SystemRandom().getrandbits(48)
        self.rooms: dict[int, Room] = {}
        self.conn_map: dict[Conn, tuple[int, int]] = {}
        self._next_room_id = 1

    # -- plumbing --------------------------------------------------------------

    def room_of(self, conn: Conn) -> Optional[Room]:
        loc = self.conn_map.get(conn)
        return self.rooms.get(loc[0]) if loc else None

    def _reap(self, room: Room) -> None:
        if room.finished:
            for conn in room.seats:
                self.conn_map.pop(conn, None)
            self.rooms.pop(room.room_id, None)

    @staticmethod
    def _room_id_of(data: dict) -> Any:
        # some client stacks capitalize 'roomID'; the server accepts both
        return data.get("roomId", data.get("roomID"))

    # -- entry points -----------------------------------------------------------

    def handle(self, conn: Conn, msg: Any) -> Out:
        if not isinstance(msg, dict) or "type" not in msg:
            return [(conn, m.error("bad-request", "message must carry a type"))]
        mtype = msg.get("type")
        data = msg.get("data")
        if mtype not in m.CLIENT_TYPES:
            return [(conn, m.error("bad-request", f"unknown type {mtype!r}"))]
        if not isinstance(data, dict):
            return [(conn, m.error("bad-request", "missing data object"))]
        if mtype == "CREATE_ROOM":
            return self._create_room(conn, data)
        if mtype == "JOIN_ROOM":
            return self._join_room(conn, data)
        return self._client_act(conn, mtype, data)

    def disconnect(self, conn: Conn) -> Out:
        loc = self.conn_map.pop(conn, None)
        if loc is None:
            return []
        room = self.rooms.get(loc[0])
        if room is None:
            return []
        if room.match is None:
            # room not started yet: just free the seat
            room.seats[loc[1]] = None
            room.user_ids[loc[1]] = None
            return []
        self.rooms.pop(loc[0], None)
        out: Out = []
        fault = m.error("room-aborted", f"seat {loc[1]} disconnected")
        for seat, other in enumerate(room.seats):
            if other is not None and other != conn:
                out.append((other, fault))
                self.conn_map.pop(other, None)
        return out

    def abort_room(self, room_id: int, reason: str) -> Out:
        room = self.rooms.pop(room_id, None)
        if room is None:
            return []
        out: Out = []
        for conn in room.seats:
            if conn is not None:
                out.append((conn, m.error("room-aborted", reason)))
                self.conn_map.pop(conn, None)
        return out

    # -- client message handlers -------------------------------------------------

    def _create_room(self, conn: Conn, data: dict) -> Out:
        if conn in self.conn_map:
            return [(conn, m.error("bad-request", "connection already seated"))]
        seat = data.get("seatNum")
        rounds = data.get("round")
        if not isinstance(seat, int) or not 0 <= seat <= 3:
            return [(conn, m.error("bad-request", "seatNum must be 0..3"))]
        if not isinstance(rounds, int) or rounds < 1:
            return [(conn, m.error("bad-request", "round must be >= 1"))]
        if len(self.rooms) >= self.max_rooms:
            return [(conn, m.error("room-limit", "no room slots free"))]
        room_id = self._next_room_id
        self._next_room_id += 1
        room = Room(room_id, rounds, derive_seed(self.seed, "room", room_id))
        room.seats[seat] = conn
        room.user_ids[seat] = data.get("userId")
        self.rooms[room_id] = room
        self.conn_map[conn] = (room_id, seat)
        return [(conn, m.ack(room_id, seat))]

    def _join_room(self, conn: Conn, data: dict) -> Out:
        if conn in self.conn_map:
            return [(conn, m.error("bad-request", "connection already seated"))]
        room_id = self._room_id_of(data)
        seat = data.get("seatNum")
        room = self.rooms.get(room_id)
        if room is None:
            return [(conn, m.error("unknown-room", f"no room {room_id!r}"))]
        if not isinstance(seat, int) or not 0 <= seat <= 3:
            return [(conn, m.error("bad-request", "seatNum must be 0..3"))]
        if room.occupied(seat):
            return [(conn, m.error("seat-occupied", f"seat {seat} is taken"))]
        room.seats[seat] = conn
        room.user_ids[seat] = data.get("userId")
        self.conn_map[conn] = (room_id, seat)
        out: Out = [(conn, m.ack(room_id, seat))]
        if room.full() and room.match is None:
            out += room.begin_match()
        return out

    def _client_act(self, conn: Conn, mtype: str, data: dict) -> Out:
        loc = self.conn_map.get(conn)
        room_id = self._room_id_of(data)
        if loc is None or (room_id is not None and loc[0] != room_id):
            return [(conn, m.error("not-in-room", "connection is not seated there"))]
        room = self.rooms.get(loc[0])
        if room is None or room.match is None:
            return [(conn, m.error("wrong-stage", "no active match"))]
        seat = data.get("player")
        if seat != loc[1]:
            return [(conn, m.error("bad-request", "player does not match the seat"))]
        stage = {"PLAY": "play", "TRIBUTE": "tribute", "PAYTRIBUTE": "back"}[mtype]
        out, err = room.on_act(seat, stage, data.get("act"))
        if err is not None:
            # reject, leave state alone, and re-issue the pending request
            retry = room.issue_request() if room.awaiting else []
            return [(conn, err)] + retry
        self._reap(room)
        return out
