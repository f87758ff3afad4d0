"""Batch runner: parallel self-play, pairwise evaluation, throughput
benchmarking, per-agent timing, and match-log persistence/replay.

Per-match seeds derive from (master seed, match index), so results are
independent of worker count and scheduling order; workers share nothing and
results merge by match index.
"""

from __future__ import annotations

import os
import platform
import time
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path
from typing import Optional, Sequence

from .agents import make_agent
from .cards import derive_seed, rank_char
from .engine import ActContext, MatchRecord, replay_match, run_match


def _team_agents(name_a: str, name_b: str, match_seed: int):
    # seats 0,2 are team 0 (first-listed); 1,3 team 1
    return [
        make_agent(name_a, derive_seed(match_seed, "agent", 0)),
        make_agent(name_b, derive_seed(match_seed, "agent", 1)),
        make_agent(name_a, derive_seed(match_seed, "agent", 2)),
        make_agent(name_b, derive_seed(match_seed, "agent", 3)),
    ]


# ---------------------------------------------------------------------------
# Pairwise evaluation (Table-1-shaped report).
# ---------------------------------------------------------------------------

@dataclass
class EvalReport:
    team_a: str
    team_b: str
    matches: int
    rounds: int
    tier_counts: tuple[int, int, int, int]   # rounds with |reward| 3, 2, 1, 0
    wins_a: int

    @property
    def win_rate(self) -> float:
        return self.wins_a / self.matches if self.matches else 0.0

    def tier_pct(self, tier: int) -> float:
        idx = {3: 0, 2: 1, 1: 2, 0: 3}[tier]
        return 100.0 * self.tier_counts[idx] / self.rounds if self.rounds else 0.0

    def header(self) -> str:
        return ("team_a\tteam_b\tmatches\trounds\tpct_rounds_reward3\t"
                "pct_rounds_reward2\tpct_rounds_reward1\tpct_rounds_reward0\t"
                "win_rate_a")

    def row(self) -> str:
        return (f"{self.team_a}\t{self.team_b}\t{self.matches}\t{self.rounds}\t"
                f"{self.tier_pct(3):.1f}\t{self.tier_pct(2):.1f}\t"
                f"{self.tier_pct(1):.1f}\t{self.tier_pct(0):.1f}\t"
                f"{100.0 * self.win_rate:.1f}")

    def pretty(self) -> str:
        return (f"{self.team_a} vs {self.team_b}: {self.matches} matches, "
                f"{self.rounds} rounds | rounds with reward 3/2/1/0: "
                f"{self.tier_pct(3):.1f}% / {self.tier_pct(2):.1f}% / "
                f"{self.tier_pct(1):.1f}% / {self.tier_pct(0):.1f}% | "
                f"win rate {100.0 * self.win_rate:.1f}%")


def _eval_worker(args) -> tuple[int, int, tuple[int, int, int, int], int]:
    name_a, name_b, match_seed = args
    agents = _team_agents(name_a, name_b, match_seed)
    record = run_match(agents, match_seed)
    tiers = [0, 0, 0, 0]
    for rr in record.round_results:
        size = abs(rr["rewards"][0])
        tiers[{3: 0, 2: 1, 1: 2, 0: 3}[size]] += 1
    won = 1 if record.winning_team == 0 else 0
    return (1, len(record.round_results), tuple(tiers), won)


def evaluate(team_a: str, team_b: str, matches: int, seed: int,
             workers: Optional[int] = None) -> EvalReport:
    """Pairwise team evaluation: team_a on seats 0/2, team_b on seats 1/3."""
    if matches < 1:
        raise ValueError("matches must be >= 1")
    jobs = [(team_a, team_b, derive_seed(seed, "match", i)) for i in range(matches)]
    results = _run_jobs(_eval_worker, jobs, workers)
    total_rounds = 0
    tiers = [0, 0, 0, 0]
    wins = 0
    for _, rounds, t, won in results:
        total_rounds += rounds
        for i in range(4):
            tiers[i] += t[i]
        wins += won
    return EvalReport(team_a, team_b, matches, total_rounds, tuple(tiers), wins)


def _run_jobs(worker, jobs, workers: Optional[int]):
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(jobs) <= 1:
        return [worker(j) for j in jobs]
    ctx = get_context()
    chunk = max(1, len(jobs) // (workers * 8))
    with ctx.Pool(workers) as pool:
        return pool.map(worker, jobs, chunksize=chunk)


# ---------------------------------------------------------------------------
# Throughput benchmark (steps-per-hour curve).
# ---------------------------------------------------------------------------

@dataclass
class ThroughputRow:
    envs: int
    steps: int
    seconds: float
    steps_per_hour: float


@dataclass
class ThroughputReport:
    machine: str
    duration: float
    rows: list[ThroughputRow] = field(default_factory=list)

    def header(self) -> str:
        return f"# machine: {self.machine}\n# seconds per point: {self.duration}\n" \
               "envs\tsteps\tseconds\tsteps_per_hour"

    def table(self) -> str:
        lines = [self.header()]
        for r in self.rows:
            lines.append(f"{r.envs}\t{r.steps}\t{r.seconds:.2f}\t{r.steps_per_hour:.0f}")
        return "\n".join(lines)


def _bench_worker(args) -> tuple[int, float]:
    seed, duration = args
    deadline = time.perf_counter() + duration
    start = time.perf_counter()
    steps = 0
    i = 0
    while time.perf_counter() < deadline:
        agents = [make_agent("random", derive_seed(seed, "agent", i, s)) for s in range(4)]
        record = run_match(agents, derive_seed(seed, "bench", i))
        steps += len(record.steps)
        i += 1
    return steps, time.perf_counter() - start


def bench(env_counts: Sequence[int], duration: float, seed: int) -> ThroughputReport:
    """Run N independent random-agent engines in parallel for each N and
    report extrapolated applied-action steps per hour.

    A step is one applied agent action: a play (including Pass), a tribute,
    or a back-tribute.
    """
    if duration <= 0:
        raise ValueError("duration must be positive")
    machine = f"{platform.platform()} / {os.cpu_count()} cpus"
    report = ThroughputReport(machine=machine, duration=duration)
    ctx = get_context()
    for n in env_counts:
        if n < 1:
            raise ValueError("environment counts must be >= 1")
        jobs = [(derive_seed(seed, "env", n, k), duration) for k in range(n)]
        if n == 1:
            results = [_bench_worker(jobs[0])]
        else:
            with ctx.Pool(n) as pool:
                results = pool.map(_bench_worker, jobs)
        steps = sum(s for s, _ in results)
        rate = sum(s / el * 3600.0 for s, el in results if el > 0)
        elapsed = max(el for _, el in results)
        report.rows.append(ThroughputRow(n, steps, elapsed, rate))
    return report


# ---------------------------------------------------------------------------
# Per-agent action-selection timing.
# ---------------------------------------------------------------------------

@dataclass
class TimingRow:
    agent: str
    selections: int
    seconds: float

    @property
    def per_second(self) -> float:
        return self.selections / self.seconds if self.seconds else float("inf")


@dataclass
class TimingReport:
    rows: list[TimingRow] = field(default_factory=list)

    def table(self) -> str:
        lines = ["agent\tselections\tseconds\tselections_per_second"]
        for r in self.rows:
            lines.append(f"{r.agent}\t{r.selections}\t{r.seconds:.4f}\t{r.per_second:.0f}")
        return "\n".join(lines)


class _TimedAgent:
    """Wraps an agent, accumulating wall time spent inside act() only."""

    def __init__(self, inner):
        self.inner = inner
        self.calls = 0
        self.seconds = 0.0

    def act(self, ctx: ActContext) -> int:
        t0 = time.perf_counter()
        choice = self.inner.act(ctx)
        self.seconds += time.perf_counter() - t0
        self.calls += 1
        return choice


def time_agents(names: Sequence[str], matches: int, seed: int) -> TimingReport:
    """Selections per second for each agent over a self-play match batch,
    measured around the agent callback only."""
    report = TimingReport()
    for name in names:
        calls = 0
        seconds = 0.0
        for i in range(matches):
            match_seed = derive_seed(seed, "time", name, i)
            timed = [_TimedAgent(make_agent(name, derive_seed(match_seed, "agent", s)))
                     for s in range(4)]
            run_match(timed, match_seed)
            calls += sum(t.calls for t in timed)
            seconds += sum(t.seconds for t in timed)
        report.rows.append(TimingRow(name, calls, seconds))
    return report


# ---------------------------------------------------------------------------
# Self-play log generation and replay verification.
# ---------------------------------------------------------------------------

def _selfplay_worker(args) -> tuple[int, str, int]:
    names, match_seed, out_dir, index, export = args
    agents = [make_agent(names[s], derive_seed(match_seed, "agent", s)) for s in range(4)]
    record = run_match(agents, match_seed)
    path = Path(out_dir) / f"match_{index:05d}.jsonl"
    path.write_text(record.to_jsonl())
    if export:
        from .encode import write_trajectories
        with open(Path(out_dir) / f"match_{index:05d}.traj", "wb") as f:
            write_trajectories(record, f)
    return index, str(path), len(record.steps)


def selfplay(matches: int, seed: int, out_dir: str,
             agent_names: Sequence[str] = ("random",) * 4,
             export: bool = False, workers: Optional[int] = None) -> list[str]:
    """Generate match logs (and optionally trajectory streams) in bulk."""
    names = tuple(agent_names) if len(agent_names) == 4 else tuple(agent_names) * 4
    if len(names) != 4:
        raise ValueError("agent_names must name 1 or 4 agents")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    jobs = [(names, derive_seed(seed, "selfplay", i), str(out), i, export)
            for i in range(matches)]
    results = _run_jobs(_selfplay_worker, jobs, workers)
    results.sort()
    return [path for _, path, _ in results]


@dataclass
class ReplaySummary:
    path: str
    seed: int
    steps: int
    rounds: int
    winning_team: int
    final_levels: tuple[str, str]

    def pretty(self) -> str:
        w = self.winning_team
        return (f"{self.path}: seed {self.seed}, {self.rounds} rounds, "
                f"{self.steps} steps, team {w} won at {self.final_levels[w]} "
                f"(other team {self.final_levels[1 - w]})")


def replay(path: str) -> ReplaySummary:
    """Re-execute a logged match, re-deriving legality at every step."""
    record = MatchRecord.from_jsonl(Path(path).read_text())
    verified = replay_match(record)
    return ReplaySummary(
        path=str(path),
        seed=record.seed,
        steps=len(verified.steps),
        rounds=len(verified.round_results),
        winning_team=verified.winning_team,
        final_levels=(rank_char(verified.final_levels[0]),
                      rank_char(verified.final_levels[1])),
    )
