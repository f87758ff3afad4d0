"""Command-line interface: serve, eval, bench, time, replay, selfplay."""

from __future__ import annotations

import argparse
import asyncio
import logging
import os
import sys
from pathlib import Path


def _parse_envs(text: str) -> list[int]:
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def _write_out(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text + "\n")
        print(f"wrote {path}")
    else:
        print(text)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="guandan",
                                     description="GuanDan simulator toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the room server")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("GUANDAN_PORT", "9617")))
    p.add_argument("--max-rooms", type=int, default=64)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--web-root", default=None,
                   help="directory of static UI files to serve over HTTP")
    p.add_argument("--autofill", default=None, choices=("random", "greedy"),
                   help="fill empty seats with this agent when a room is created")
    p.add_argument("--act-timeout", type=float, default=30.0,
                   help="seconds a socket-attached seat may take per action (0 = off)")

    p = sub.add_parser("bots", help="attach agents to a server as protocol clients")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int,
                   default=int(os.environ.get("GUANDAN_PORT", "9617")))
    p.add_argument("--room", type=int, default=None,
                   help="room to join; omit to create one")
    p.add_argument("--seats", default="0,1,2,3",
                   help="comma-separated seats to fill")
    p.add_argument("--agent", action="append", default=None,
                   help="agent per seat: repeat the flag, or give one for all "
                        "(default greedy)")
    p.add_argument("--matches", type=int, default=1,
                   help="series length when creating the room")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("eval", help="pairwise team evaluation")
    p.add_argument("team_a", choices=("random", "greedy"))
    p.add_argument("team_b", choices=("random", "greedy"))
    p.add_argument("--matches", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--mirror", action="store_true",
                   help="also run the seat-swapped pairing")
    p.add_argument("--out", default=None)

    p = sub.add_parser("bench", help="parallel-environment throughput benchmark")
    p.add_argument("--envs", default="1-10",
                   help="environment counts, e.g. '1-10' or '1,2,4,8'")
    p.add_argument("--duration", type=float, default=10.0,
                   help="seconds per measured point")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("time", help="per-agent action-selection timing")
    p.add_argument("--agents", default="random,greedy")
    p.add_argument("--matches", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)

    p = sub.add_parser("replay", help="verify a logged match by re-execution")
    p.add_argument("path")

    p = sub.add_parser("selfplay", help="bulk match-log generation")
    p.add_argument("--matches", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--agents", default="random",
                   help="one agent name or four comma-separated names")
    p.add_argument("--export", action="store_true",
                   help="also write trajectory streams")
    p.add_argument("--workers", type=int, default=None)

    args = parser.parse_args(argv)
    logging.basicConfig(
        level=os.environ.get("GUANDAN_LOG", "INFO").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s")

    if args.command == "serve":
        from .protocol.server import ServerConfig, run_server
        config = ServerConfig(host=args.host, port=args.port,
                              max_rooms=args.max_rooms, seed=args.seed,
                              web_root=args.web_root, autofill=args.autofill,
                              act_timeout=args.act_timeout)
        try:
            asyncio.run(run_server(config))
        except KeyboardInterrupt:
            pass
        return 0

    if args.command == "bots":
        from .agents import make_agent
        from .cards import derive_seed
        from .protocol.client import WireAgentSession, run_bot_client

        seats = [int(s) for s in args.seats.split(",") if s.strip() != ""]
        names = args.agent or ["greedy"]
        if len(names) == 1:
            names = names * len(seats)
        if len(names) != len(seats):
            print("need one agent per seat (or a single agent)", file=sys.stderr)
            return 2

        async def attach_all():
            tasks = []
            room_id = args.room
            for i, (seat, name) in enumerate(zip(seats, names)):
                agent = make_agent(name, derive_seed(args.seed, "bot", seat))
                if room_id is None and i == 0:
                    session = WireAgentSession(agent, f"{name}-{seat}", seat=seat,
                                               create_rounds=args.matches)
                else:
                    session = WireAgentSession(agent, f"{name}-{seat}",
                                               room_id=room_id, seat=seat)
                tasks.append(asyncio.create_task(
                    run_bot_client(args.host, args.port, session)))
                if room_id is None and i == 0:
                    while session.room_id is None and not tasks[0].done():
                        await asyncio.sleep(0.05)
                    room_id = session.room_id
                    if room_id is not None:
                        print(f"created room {room_id}")
            await asyncio.gather(*tasks)

        asyncio.run(attach_all())
        return 0

    if args.command == "eval":
        from .harness import evaluate
        report = evaluate(args.team_a, args.team_b, args.matches, args.seed,
                          workers=args.workers)
        lines = [report.header(), report.row()]
        print(report.pretty())
        if args.mirror:
            mirrored = evaluate(args.team_b, args.team_a, args.matches,
                                args.seed, workers=args.workers)
            lines.append(mirrored.row())
            print(mirrored.pretty())
        _write_out(args.out, "\n".join(lines))
        return 0

    if args.command == "bench":
        from .harness import bench
        report = bench(_parse_envs(args.envs), args.duration, args.seed)
        _write_out(args.out, report.table())
        return 0

    if args.command == "time":
        from .harness import time_agents
        report = time_agents([a.strip() for a in args.agents.split(",")],
                             args.matches, args.seed)
        _write_out(args.out, report.table())
        return 0

    if args.command == "replay":
        from .engine import ReplayMismatch
        from .harness import replay
        try:
            summary = replay(args.path)
        except ReplayMismatch as exc:
            print(f"replay mismatch: {exc}", file=sys.stderr)
            return 1
        print(summary.pretty())
        return 0

    if args.command == "selfplay":
        from .harness import selfplay
        names = [a.strip() for a in args.agents.split(",")]
        paths = selfplay(args.matches, args.seed, args.out,
                         agent_names=names, export=args.export,
                         workers=args.workers)
        print(f"wrote {len(paths)} match logs to {args.out}")
        return 0

    return 2  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
