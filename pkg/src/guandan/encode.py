"""Fixed-width per-player feature encoders and trajectory export.

The observation is a flat 722-entry vector:

    5 x 54   card-count blocks, entries in {0,1,2}:
             own hand, unseen cards, cards played by the left-hand
             opponent, by the partner, by the right-hand opponent
    4 x 79   action blocks: the immediately preceding action, then the most
             recent action of LHO / partner / RHO
    3 x 28   one-hot remaining-count blocks (0..27) for LHO / partner / RHO
    1 x 39   three 13-wide one-hots: own team level, opposing level, round level
    1 x 13   wild-count block: the round-level slot holds the player's wild
             count, all other slots zero

An action block is 54 card counts + a 10-wide combination-type one-hot +
a 15-wide key-rank one-hot; Pass and NULL (no action) are all zeros.

Play order runs counterclockwise by increasing seat, so the seat acting
after you (seat+1) sits on your right and the seat acting before you
(seat+3) on your left.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import BinaryIO, Iterator, Optional

import numpy as np

from .cards import NUM_CARD_KINDS, card_rank
from .combos import _PASS, _SINGLE, _as_tuple
from .engine import (
    MatchRecord,
    MatchState,
    Phase,
    ReplayMismatch,
    RoundResult,
    RoundState,
    derive_seed,
    settle_round,
    start_match,
    start_round,
    team_of,
)

OBS_DIM = 722
ACTION_DIM = 79
NUM_TYPES = 10

_CARD_BLOCKS = 5
_ACTION_BLOCKS = 4
_COUNT_BLOCKS = 3
_COUNT_DIM = 28
_LEVEL_DIM = 39
_WILD_DIM = 13

assert OBS_DIM == _CARD_BLOCKS * 54 + _ACTION_BLOCKS * ACTION_DIM + \
    _COUNT_BLOCKS * _COUNT_DIM + _LEVEL_DIM + _WILD_DIM

TRAJECTORY_FORMAT = "guandan-trajectory"
TRAJECTORY_VERSION = 1
_FRAME_HEAD = struct.Struct("<IIBBBB")
_FRAME_SIZE = _FRAME_HEAD.size + 4 * OBS_DIM + 4 * ACTION_DIM + 4


def encode_action(action, level: int, out: Optional[np.ndarray] = None) -> np.ndarray:
    """79-entry encoding of a play action; Pass or None encodes as zeros."""
    if out is None:
        out = np.zeros(ACTION_DIM, dtype=np.uint8)
    else:
        out[:] = 0
    if action is None:
        return out
    ctype, key, cards = _as_tuple(action)
    if ctype == _PASS:
        return out
    for cid in cards:
        out[cid] += 1
    out[54 + ctype] = 1
    out[64 + key] = 1
    return out


def encode_card_action(cid: int, out: Optional[np.ndarray] = None) -> np.ndarray:
    """Tribute and back-tribute transfers encode as a Single of their card."""
    return encode_action((_SINGLE, card_rank(cid), (cid,)), 0, out)


def encode_observation(rnd: RoundState, match: MatchState, seat: int,
                       out: Optional[np.ndarray] = None) -> np.ndarray:
    """The 722-entry observation of ``seat`` at the current point of ``rnd``."""
    if out is None:
        out = np.zeros(OBS_DIM, dtype=np.uint8)
    else:
        out[:] = 0
    lho = (seat + 3) & 3
    partner = seat ^ 2
    rho = (seat + 1) & 3
    hand = rnd.hands[seat]
    played = rnd.played_counts

    out[0:54] = hand
    unseen = out[54:108]
    for cid in range(NUM_CARD_KINDS):
        unseen[cid] = 2 - hand[cid] - played[0][cid] - played[1][cid] \
            - played[2][cid] - played[3][cid]
    out[108:162] = played[lho]
    out[162:216] = played[partner]
    out[216:270] = played[rho]

    base = 270
    prev = rnd.last_action[rnd.last_actor] if rnd.last_actor is not None else None
    encode_action(prev, rnd.level, out[base:base + ACTION_DIM])
    for i, other in enumerate((lho, partner, rho)):
        lo = base + (i + 1) * ACTION_DIM
        encode_action(rnd.last_action[other], rnd.level, out[lo:lo + ACTION_DIM])

    base = 270 + 4 * ACTION_DIM
    for i, other in enumerate((lho, partner, rho)):
        # a tribute receiver transiently holds 28 cards before returning one;
        # the one-hot covers 0..27, so that state reads as a full hand
        out[base + i * _COUNT_DIM + min(rnd.hand_sizes[other], 27)] = 1

    base += 3 * _COUNT_DIM
    own_level = match.team_levels[team_of(seat)]
    opp_level = match.team_levels[1 - team_of(seat)]
    out[base + own_level] = 1
    out[base + 13 + opp_level] = 1
    out[base + 26 + rnd.level] = 1

    base += _LEVEL_DIM
    out[base + rnd.level] = hand[13 + rnd.level]
    return out


def assign_rewards(result: RoundResult) -> tuple[int, int, int, int]:
    """Per-seat rewards implied by a settled round: +/-3, +/-2, +/-1 mirrored
    across teams, or all zero for the level-A Dweller-partner case."""
    if result.zero_reward:
        return (0, 0, 0, 0)
    d = result.level_delta
    return tuple(d if team_of(s) == result.banker_team else -d for s in range(4))


@dataclass
class TransitionRecord:
    """One exported time step: per-seat observations before the action, the
    acting seat's action encoding (zeros for everyone else), per-seat rewards
    (nonzero only on a round's final step), and the round-terminal flag."""

    round_index: int
    step_index: int
    phase: str
    seat: int
    terminal: bool
    observations: np.ndarray   # (4, 722) uint8
    actions: np.ndarray        # (4, 79) uint8
    rewards: np.ndarray        # (4,) int8


_PHASE_CODES = {"play": 0, "tribute": 1, "back": 2}
_PHASE_NAMES = {v: k for k, v in _PHASE_CODES.items()}


def export_trajectories(record: MatchRecord) -> Iterator[TransitionRecord]:
    """Replay a match record through the engine, yielding one transition per
    applied action. Deterministic: re-exporting a record is byte-identical."""
    match = start_match(record.seed)
    idx = 0
    total = len(record.steps)
    while not match.terminated and idx < total:
        rnd_idx = match.round_index
        rnd = start_round(match, derive_seed(record.seed, "round", rnd_idx))
        frames: list[TransitionRecord] = []
        while rnd.phase is not Phase.SETTLED:
            if idx >= total:
                raise ReplayMismatch(idx, "record ended mid-round")
            rec_round, rec_seat, rec_stage, rec_action, rec_rest = record.steps[idx]
            seat = rnd.current_seat
            stage = rnd.phase.value if rnd.phase is not Phase.PLAY else "play"
            if rec_round != rnd_idx or rec_seat != seat or rec_stage != stage:
                raise ReplayMismatch(idx, "record diverges from engine state")
            obs = np.zeros((4, OBS_DIM), dtype=np.uint8)
            for s in range(4):
                encode_observation(rnd, match, s, obs[s])
            acts = np.zeros((4, ACTION_DIM), dtype=np.uint8)
            if stage == "play":
                encode_action(rec_action, rnd.level, acts[seat])
            else:
                encode_card_action(rec_action, acts[seat])
            if rec_action not in rnd.legal_actions():
                raise ReplayMismatch(idx, "recorded action not in legal set")
            rnd.apply_action(seat, rec_action)
            if tuple(rnd.hand_sizes) != tuple(rec_rest):
                raise ReplayMismatch(idx, "hand sizes diverged")
            frames.append(TransitionRecord(
                round_index=rnd_idx, step_index=idx, phase=stage, seat=seat,
                terminal=False, observations=obs, actions=acts,
                rewards=np.zeros(4, dtype=np.int8),
            ))
            idx += 1
        result = settle_round(rnd, match)
        frames[-1].terminal = True
        frames[-1].rewards = np.asarray(assign_rewards(result), dtype=np.int8)
        yield from frames
    if idx != total:
        raise ReplayMismatch(idx, "record has trailing steps")


def write_trajectories(record: MatchRecord, fp: BinaryIO) -> int:
    """Serialize the export stream; returns the number of frames written."""
    header = {
        "format": TRAJECTORY_FORMAT,
        "version": TRAJECTORY_VERSION,
        "seed": record.seed,
        "obs_dim": OBS_DIM,
        "action_dim": ACTION_DIM,
        "seats": 4,
    }
    fp.write((json.dumps(header, sort_keys=True) + "\n").encode("utf-8"))
    n = 0
    for tr in export_trajectories(record):
        fp.write(_FRAME_HEAD.pack(tr.round_index, tr.step_index,
                                  _PHASE_CODES[tr.phase], tr.seat,
                                  1 if tr.terminal else 0, 0))
        fp.write(tr.observations.tobytes())
        fp.write(tr.actions.tobytes())
        fp.write(tr.rewards.tobytes())
        n += 1
    return n


def read_trajectories(fp: BinaryIO) -> Iterator[TransitionRecord]:
    header_line = fp.readline()
    header = json.loads(header_line.decode("utf-8"))
    if header.get("format") != TRAJECTORY_FORMAT:
        raise ValueError("not a trajectory stream")
    if header.get("obs_dim") != OBS_DIM or header.get("action_dim") != ACTION_DIM:
        raise ValueError("dimension mismatch in trajectory header")
    while True:
        head = fp.read(_FRAME_HEAD.size)
        if not head:
            return
        if len(head) != _FRAME_HEAD.size:
            raise ValueError("truncated trajectory frame")
        rnd_idx, step_idx, phase, seat, terminal, _ = _FRAME_HEAD.unpack(head)
        obs = np.frombuffer(fp.read(4 * OBS_DIM), dtype=np.uint8).reshape(4, OBS_DIM)
        acts = np.frombuffer(fp.read(4 * ACTION_DIM), dtype=np.uint8).reshape(4, ACTION_DIM)
        rewards = np.frombuffer(fp.read(4), dtype=np.int8)
        yield TransitionRecord(
            round_index=rnd_idx, step_index=step_idx,
            phase=_PHASE_NAMES[phase], seat=seat, terminal=bool(terminal),
            observations=obs, actions=acts, rewards=rewards,
        )
