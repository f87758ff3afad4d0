import io
import random

import numpy as np
import pytest

from guandan.agents import RandomAgent
from guandan.cards import card_from_code, derive_seed
from guandan.combos import Combination, CombinationType, PASS_TUPLE
from guandan.encode import (
    ACTION_DIM,
    OBS_DIM,
    assign_rewards,
    encode_action,
    encode_card_action,
    encode_observation,
    export_trajectories,
    read_trajectories,
    write_trajectories,
)
from guandan.engine import (
    Phase,
    ReplayMismatch,
    run_match,
    settle_round,
    start_match,
    start_round,
)

C = card_from_code


def _sample_states(n, master_seed=0):
    """(round, match, seat) snapshots drawn from live random matches."""
    rng = random.Random(master_seed)
    states = []
    seed = 0
    while len(states) < n:
        seed += 1
        match = start_match(derive_seed(master_seed, "m", seed))
        agents = [RandomAgent(derive_seed(seed, "a", s)) for s in range(4)]
        while not match.terminated and len(states) < n:
            rnd = start_round(match, derive_seed(match.seed, "round", match.round_index))
            while rnd.phase is not Phase.SETTLED and len(states) < n:
                seat = rnd.current_seat
                actions = rnd.legal_actions()
                if rng.random() < 0.05:
                    states.append((rnd, match, seat))
                rnd.apply_action(seat, actions[rng.randrange(len(actions))])
            if rnd.phase is Phase.SETTLED:
                settle_round(rnd, match)
    return states


def test_action_dimensions_and_layout():
    pass_vec = encode_action(Combination(CombinationType.PASS, -1, ()), 0)
    assert pass_vec.shape == (ACTION_DIM,)
    assert not pass_vec.any()
    assert not encode_action(None, 0).any()

    single = encode_action((int(CombinationType.SINGLE), 0, (C("S2"),)), 0)
    assert single.sum() == 3               # one count, one type bit, one rank bit
    assert single[C("S2")] == 1
    assert single[54 + int(CombinationType.SINGLE)] == 1
    assert single[64 + 0] == 1

    jb = encode_action((int(CombinationType.JOKER_BOMB), 14,
                        (52, 52, 53, 53)), 0)
    assert jb[52] == 2 and jb[53] == 2
    assert jb[54 + int(CombinationType.JOKER_BOMB)] == 1
    assert jb[64 + 14] == 1                # red joker rank bit


def test_tribute_steps_encode_as_singles():
    vec = encode_card_action(C("D9"))
    assert vec[C("D9")] == 1
    assert vec[54 + int(CombinationType.SINGLE)] == 1
    assert vec.sum() == 3


def test_observation_dimension_and_block_invariants():
    for rnd, match, seat in _sample_states(40, master_seed=1):
        obs = encode_observation(rnd, match, seat)
        assert obs.shape == (OBS_DIM,)
        # five 54-wide count blocks, entries within multiplicity two
        for b in range(5):
            block = obs[b * 54:(b + 1) * 54]
            assert block.max() <= 2
            assert block.sum() <= 108
        # remaining-count blocks are exactly one-hot
        base = 270 + 4 * ACTION_DIM
        for i in range(3):
            assert obs[base + i * 28: base + (i + 1) * 28].sum() == 1
        # 39-dim level block is three one-hots
        lv = obs[base + 84: base + 84 + 39]
        assert lv.sum() == 3
        assert lv[:13].sum() == 1 and lv[13:26].sum() == 1 and lv[26:].sum() == 1
        # wild block bounded by two copies
        assert obs[-13:].max() <= 2
        assert obs[-13:].sum() == rnd.hands[seat][13 + rnd.level]


def test_observation_partition_identities():
    for rnd, match, seat in _sample_states(25, master_seed=2):
        obs = encode_observation(rnd, match, seat).astype(int)
        own = obs[:54]
        unseen = obs[54:108]
        played_blocks = obs[108:270].reshape(3, 54)
        own_played = np.array(rnd.played_counts[seat])
        total = own + unseen + played_blocks.sum(axis=0) + own_played
        assert (total == 2).all()          # the full two-deck multiset
        # the unseen block is exactly the three concealed hands
        others = np.zeros(54, dtype=int)
        for s in range(4):
            if s != seat:
                others += np.array(rnd.hands[s])
        assert (unseen == others).all()


def test_observation_at_round_start():
    match = start_match(3)
    rnd = start_round(match, 9)
    seat = rnd.current_seat
    obs = encode_observation(rnd, match, seat)
    assert obs[:54].sum() == 27
    assert obs[54:108].sum() == 81         # 108 - own 27, nothing played yet
    assert not obs[270:270 + 4 * ACTION_DIM].any()   # no prior actions


def test_observation_ignores_concealed_permutations():
    # swapping cards between the two concealed opponents must not change
    # the observation (nothing the seat can see depends on that split)
    for rnd, match, seat in _sample_states(10, master_seed=4):
        others = [s for s in range(4) if s != seat]
        a, b = others[0], others[1]
        ca = next((c for c in range(54) if rnd.hands[a][c]), None)
        cb = next((c for c in range(54) if rnd.hands[b][c]), None)
        if ca is None or cb is None or ca == cb:
            continue
        before = encode_observation(rnd, match, seat).copy()
        rnd.hands[a][ca] -= 1
        rnd.hands[a][cb] += 1
        rnd.hands[b][cb] -= 1
        rnd.hands[b][ca] += 1
        after = encode_observation(rnd, match, seat)
        assert np.array_equal(before, after)


def test_encode_action_injective_within_state():
    for rnd, match, seat in _sample_states(15, master_seed=5):
        if rnd.phase is not Phase.PLAY:
            continue
        seen = {}
        for action in rnd.legal_actions():
            vec = encode_action(action, rnd.level).tobytes()
            assert vec not in seen or action == seen[vec]
            seen[vec] = action


def test_assign_rewards_matches_engine():
    rec_match = start_match(8)
    agents = [RandomAgent(s) for s in range(4)]
    while not rec_match.terminated:
        rnd = start_round(rec_match, derive_seed(rec_match.seed, "round",
                                                 rec_match.round_index))
        rng = random.Random(1)
        while rnd.phase is not Phase.SETTLED:
            seat = rnd.current_seat
            actions = rnd.legal_actions()
            rnd.apply_action(seat, actions[rng.randrange(len(actions))])
        result = settle_round(rnd, rec_match)
        assert assign_rewards(result) == result.rewards


def test_export_stream_one_record_per_step():
    rec = run_match([RandomAgent(i) for i in range(4)], seed=12)
    frames = list(export_trajectories(rec))
    assert len(frames) == len(rec.steps)
    # exactly one seat acts per step; other action blocks are zero
    for fr in frames[:200]:
        for s in range(4):
            if s != fr.seat:
                assert not fr.actions[s].any()
        if fr.phase == "play":
            pass  # the acting row may be zero too (a pass)
        else:
            assert fr.actions[fr.seat].sum() == 3
    # rewards only on terminal frames, summing to zero per round
    for fr in frames:
        if not fr.terminal:
            assert not fr.rewards.any()
        else:
            assert int(fr.rewards.sum()) == 0


def test_export_rewards_follow_round_results():
    rec = run_match([RandomAgent(i) for i in range(4)], seed=13)
    terminal = {fr.round_index: fr.rewards.tolist()
                for fr in export_trajectories(rec) if fr.terminal}
    for rr in rec.round_results:
        assert terminal[rr["round"]] == rr["rewards"]


def test_export_byte_identical_and_readable():
    rec = run_match([RandomAgent(i) for i in range(4)], seed=14)
    b1, b2 = io.BytesIO(), io.BytesIO()
    n1 = write_trajectories(rec, b1)
    n2 = write_trajectories(rec, b2)
    assert n1 == n2 == len(rec.steps)
    assert b1.getvalue() == b2.getvalue()
    b1.seek(0)
    frames = list(read_trajectories(b1))
    assert len(frames) == n1
    orig = list(export_trajectories(rec))
    for a, b in zip(frames, orig):
        assert a.phase == b.phase and a.seat == b.seat
        assert np.array_equal(a.observations, b.observations)
        assert np.array_equal(a.actions, b.actions)
        assert np.array_equal(a.rewards, b.rewards)
        assert a.terminal == b.terminal


def test_export_rejects_corrupt_record():
    rec = run_match([RandomAgent(i) for i in range(4)], seed=15)
    for i, (rnd_idx, seat, stage, action, rest) in enumerate(rec.steps):
        if stage == "play" and action != PASS_TUPLE:
            rec.steps[i] = (rnd_idx, seat, stage, PASS_TUPLE, rest)
            break
    with pytest.raises(ReplayMismatch) as exc:
        list(export_trajectories(rec))
    assert exc.value.step == i


def test_read_trajectories_rejects_foreign_stream():
    with pytest.raises(ValueError):
        list(read_trajectories(io.BytesIO(b'{"format": "something-else"}\n')))
