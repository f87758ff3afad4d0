"""Client-side helpers: adapt an in-process agent to the wire protocol and a
newline-delimited-JSON socket client for attaching headless agents."""

from __future__ import annotations

import asyncio
import json
from typing import Optional

from ..agents import Agent
from ..cards import NUM_CARD_KINDS, card_from_code, rank_from_char
from ..combos import action_from_wire
from ..engine import ActContext


class WireAgentSession:
    """Feeds server messages to an agent and produces its reply messages.

    Transport-agnostic: call :meth:`on_message` with each decoded server
    message; a non-None return value is the client message to send back.
    """

    def __init__(self, agent: Agent, user_id: str, room_id: Optional[int] = None,
                 seat: Optional[int] = None, create_rounds: Optional[int] = None):
        self.agent = agent
        self.user_id = user_id
        self.room_id = room_id
        self.seat = seat
        self.create_rounds = create_rounds
        self.done = False
        self._series_over = False

    def hello(self) -> dict:
        """The opening CREATE_ROOM/JOIN_ROOM message."""
        if self.create_rounds is not None:
            return {"type": "CREATE_ROOM", "data": {
                "userId": self.user_id, "round": self.create_rounds,
                "seatNum": self.seat}}
        return {"type": "JOIN_ROOM", "data": {
            "userId": self.user_id, "roomId": self.room_id,
            "seatNum": self.seat}}

    def on_message(self, msg: dict) -> Optional[dict]:
        mtype = msg.get("type")
        if mtype == "ack":
            self.room_id = msg["roomId"]
            self.seat = msg["seatNum"]
            return None
        if mtype == "error":
            if msg.get("code") == "room-aborted":
                self.done = True
            self.agent.observe(msg)
            return None
        if mtype == "notify":
            self.agent.observe(msg)
            stage = msg.get("stage")
            if stage == "gameOver" and msg.get("curTimes") == msg.get("settingTimes"):
                self._series_over = True
            elif stage == "gameResult" and self._series_over:
                self.done = True  # the final gameResult closes the session
            return None
        if mtype == "act":
            return self._answer(msg)
        return None

    def _answer(self, msg: dict) -> dict:
        stage = msg["stage"]
        level = rank_from_char(msg["curRank"])
        hand_counts = [0] * NUM_CARD_KINDS
        for code in msg["handCards"]:
            hand_counts[card_from_code(code)] += 1
        wire_list = msg["actionList"]
        if stage == "play":
            actions = [action_from_wire(a) for a in wire_list]
            greater = msg.get("greaterAction")
            greater_t = action_from_wire(greater) if greater else None
        else:
            actions = [card_from_code(a[2][0]) for a in wire_list]
            greater_t = None
        ctx = ActContext(stage, self.seat, actions, level, greater_t,
                         hand_counts, len(msg["handCards"]))
        idx = self.agent.act(ctx)
        if not isinstance(idx, int) or not 0 <= idx <= msg["indexRange"]:
            raise ValueError(f"agent chose index {idx!r} outside the range")
        act = wire_list[idx]
        if stage == "play":
            return {"type": "PLAY", "data": {
                "roomId": self.room_id, "player": self.seat, "act": act}}
        if stage == "tribute":
            return {"type": "TRIBUTE", "data": {
                "roomId": self.room_id, "player": self.seat, "act": act}}
        return {"type": "PAYTRIBUTE", "data": {
            "roomId": self.room_id, "player": self.seat,
            "tributePos": msg["tributePos"], "tribute": msg["tribute"],
            "act": act}}


async def run_bot_client(host: str, port: int, session: WireAgentSession) -> None:
    """Attach one agent to a server over the newline-delimited JSON binding
    and play until the room finishes."""
    # action lists serialize large; the default 64 KiB line limit is too low
    reader, writer = await asyncio.open_connection(host, port, limit=1 << 24)

    def send(obj: dict) -> None:
        writer.write(json.dumps(obj).encode("utf-8") + b"\n")

    send(session.hello())
    await writer.drain()
    try:
        while not session.done:
            line = await reader.readline()
            if not line:
                break
            reply = session.on_message(json.loads(line))
            if reply is not None:
                send(reply)
                await writer.drain()
    finally:
        writer.close()
        try:
            await writer.wait_closed()
        except (ConnectionError, OSError):
            pass
