"""Agent interface and the two built-in baselines.

Agents pick an index into the legal action list they are shown, either
in-process (:class:`guandan.engine.ActContext`) or through the wire protocol
(an act-request adapted into the same shape). The baselines are deliberately
simple: they exist to validate the harness and to give the UI an opponent,
not to play well.
"""

from __future__ import annotations

import random
from typing import Optional

from .cards import ELEVATED_VALUE, card_rank
from .combos import PASS_TUPLE, _BOMB
from .engine import ActContext


class Agent:
    """Base agent: choose an index in [0, len(ctx.actions))."""

    name = "agent"

    def act(self, ctx: ActContext) -> int:
        raise NotImplementedError

    def observe(self, message: dict) -> None:
        """Notification hook for protocol-attached agents; default ignores."""


class RandomAgent(Agent):
    name = "random"

    def __init__(self, seed: int = 0):
        self.rng = random.Random(seed)

    def act(self, ctx: ActContext) -> int:
        return self.rng.randrange(len(ctx.actions))


class GreedyAgent(Agent):
    """Dump cheap combinations, keep bombs until the hand is short.

    Leading: the smallest non-bomb by (size, elevated key), bombs last.
    Following: the cheapest beating non-bomb if any; otherwise pass, unless
    the hand has at most ``bomb_threshold`` cards and a bomb can take the
    trick. Tribute stages give the lowest eligible card.
    """

    name = "greedy"

    def __init__(self, seed: int = 0, bomb_threshold: int = 8):
        self.bomb_threshold = bomb_threshold

    def act(self, ctx: ActContext) -> int:
        elev = ELEVATED_VALUE[ctx.level]
        if ctx.stage != "play":
            if ctx.stage == "tribute":
                return 0  # all tribute options share the highest rank
            lows = min(range(len(ctx.actions)),
                       key=lambda i: (elev[card_rank(ctx.actions[i])], ctx.actions[i]))
            return lows
        actions = ctx.actions
        if ctx.greater_action is None:
            return min(range(len(actions)),
                       key=lambda i: (actions[i][0] >= _BOMB, len(actions[i][2]),
                                      elev[actions[i][1]], actions[i]))
        best: Optional[int] = None
        best_key = None
        cheapest_bomb: Optional[int] = None
        bomb_key = None
        for i, act in enumerate(actions):
            t, key, cards = act
            if t == PASS_TUPLE[0]:
                continue
            if t >= _BOMB:
                k = (t, len(cards), elev[key])
                if cheapest_bomb is None or k < bomb_key:
                    cheapest_bomb, bomb_key = i, k
                continue
            k = (len(cards), elev[key], cards)
            if best is None or k < best_key:
                best, best_key = i, k
        if best is not None:
            return best
        if cheapest_bomb is not None and ctx.hand_size <= self.bomb_threshold:
            return cheapest_bomb
        return 0  # pass


AGENT_NAMES = ("random", "greedy")


def make_agent(name: str, seed: int = 0) -> Agent:
    if name == "random":
        return RandomAgent(seed)
    if name == "greedy":
        return GreedyAgent(seed)
    raise ValueError(f"unknown agent {name!r}; expected one of {AGENT_NAMES}")
