"""Wire message construction for the room protocol.

Every function returns a plain dict ready for JSON serialization; field
names, stage names, card codes, and the 3-element action form are the
protocol surface and must not drift.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..cards import card_code, rank_char, sort_key
from ..combos import action_to_wire

CLIENT_TYPES = ("CREATE_ROOM", "JOIN_ROOM", "PLAY", "TRIBUTE", "PAYTRIBUTE")
NOTIFY_STAGES = ("beginning", "play", "tribute", "anti-tribute", "back",
                 "episodeOver", "gameOver", "gameResult")
ACT_STAGES = ("play", "tribute", "back")


def sorted_codes(cards: Sequence[int], level: int) -> list[str]:
    return [card_code(c) for c in sorted(cards, key=sort_key(level))]


def tribute_wire(cid: int) -> list:
    return ["tribute", "tribute", [card_code(cid)]]


def back_wire(cid: int) -> list:
    return ["back", "back", [card_code(cid)]]


def play_wire(action) -> list:
    return action_to_wire(action)


def error(code: str, message: str) -> dict:
    return {"type": "error", "code": code, "message": message}


def ack(room_id: int, seat: int) -> dict:
    return {"type": "ack", "roomId": room_id, "seatNum": seat}


def beginning(hand_codes: list[str], seat: int) -> dict:
    return {"type": "notify", "stage": "beginning",
            "handCards": hand_codes, "myPos": seat}


def play_notify(cur_pos: int, cur_action: list,
                greater_pos: Optional[int], greater_action: Optional[list]) -> dict:
    return {"type": "notify", "stage": "play", "curPos": cur_pos,
            "curAction": cur_action, "greaterPos": greater_pos,
            "greaterAction": greater_action}


def tribute_notify(results: Sequence[tuple[int, int, int]]) -> dict:
    return {"type": "notify", "stage": "tribute",
            "result": [[p, r, card_code(c)] for p, r, c in results]}


def anti_tribute_notify(count: int, seats: Sequence[int]) -> dict:
    return {"type": "notify", "stage": "anti-tribute",
            "antiNums": count, "antiPos": list(seats)}


def back_notify(results: Sequence[tuple[int, int, int]]) -> dict:
    return {"type": "notify", "stage": "back",
            "result": [[g, r, card_code(c)] for g, r, c in results]}


def episode_over(order: Sequence[int], level: int,
                 rest_cards: Sequence[tuple[int, list[str]]]) -> dict:
    return {"type": "notify", "stage": "episodeOver", "order": list(order),
            "curRank": rank_char(level),
            "restCards": [[seat, codes] for seat, codes in rest_cards]}


def game_over(cur_times: int, setting_times: int) -> dict:
    return {"type": "notify", "stage": "gameOver",
            "curTimes": cur_times, "settingTimes": setting_times}


def game_result(victory: int, winner_level: int, loser_level: int) -> dict:
    return {"type": "notify", "stage": "gameResult", "victory": victory,
            "victoryRank": [rank_char(winner_level), rank_char(loser_level)]}


def play_request(hand_codes: list[str], rest: Sequence[int], self_rank: int,
                 oppo_rank: int, cur_rank: int, cur_pos: Optional[int],
                 cur_action: Optional[list], greater_action: Optional[list],
                 greater_pos: Optional[int], action_list: list) -> dict:
    return {
        "type": "act",
        "handCards": hand_codes,
        "publicInfo": [{"rest": n} for n in rest],
        "selfRank": rank_char(self_rank),
        "oppoRank": rank_char(oppo_rank),
        "curRank": rank_char(cur_rank),
        "stage": "play",
        "curPos": cur_pos,
        "curAction": cur_action,
        "greaterAction": greater_action,
        "greaterPos": greater_pos,
        "actionList": action_list,
        "indexRange": len(action_list) - 1,
    }


def tribute_request(hand_codes: list[str], self_rank: int, oppo_rank: int,
                    cur_rank: int, action_list: list) -> dict:
    return {
        "type": "act",
        "handCards": hand_codes,
        "selfRank": rank_char(self_rank),
        "oppoRank": rank_char(oppo_rank),
        "curRank": rank_char(cur_rank),
        "stage": "tribute",
        "actionList": action_list,
        "indexRange": len(action_list) - 1,
    }


def back_request(hand_codes: list[str], self_rank: int, oppo_rank: int,
                 cur_rank: int, tribute_pos: int, tribute_card: int,
                 action_list: list) -> dict:
    return {
        "type": "act",
        "handCards": hand_codes,
        "selfRank": rank_char(self_rank),
        "oppoRank": rank_char(oppo_rank),
        "curRank": rank_char(cur_rank),
        "stage": "back",
        "tributePos": tribute_pos,
        "tribute": card_code(tribute_card),
        "actionList": action_list,
        "indexRange": len(action_list) - 1,
    }
