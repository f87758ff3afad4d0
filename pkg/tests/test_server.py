"""Transport-level tests: newline-delimited sockets, WebSocket framing,
static file serving, and server-attached bots."""

import asyncio
import base64
import json
import os

import pytest

from guandan.agents import GreedyAgent, RandomAgent
from guandan.protocol.client import WireAgentSession, run_bot_client
from guandan.protocol.server import GuandanServer, ServerConfig


async def _ws_connect(host, port, path="/"):
    reader, writer = await asyncio.open_connection(host, port, limit=1 << 24)
    key = base64.b64encode(os.urandom(16)).decode()
    writer.write((f"GET {path} HTTP/1.1\r\nHost: {host}\r\nUpgrade: websocket\r\n"
                  f"Connection: Upgrade\r\nSec-WebSocket-Key: {key}\r\n"
                  f"Sec-WebSocket-Version: 13\r\n\r\n").encode())
    await writer.drain()
    head = await reader.readuntil(b"\r\n\r\n")
    assert b"101" in head.split(b"\r\n")[0]
    return reader, writer


def _ws_send(writer, obj):
    data = json.dumps(obj).encode()
    mask = os.urandom(4)
    payload = bytes(b ^ mask[i & 3] for i, b in enumerate(data))
    n = len(data)
    if n < 126:
        head = bytes([0x81, 0x80 | n])
    elif n < 1 << 16:
        head = bytes([0x81, 0x80 | 126]) + n.to_bytes(2, "big")
    else:
        head = bytes([0x81, 0x80 | 127]) + n.to_bytes(8, "big")
    writer.write(head + mask + payload)


async def _ws_recv(reader):
    head = await reader.readexactly(2)
    ln = head[1] & 0x7F
    if ln == 126:
        ln = int.from_bytes(await reader.readexactly(2), "big")
    elif ln == 127:
        ln = int.from_bytes(await reader.readexactly(8), "big")
    payload = await reader.readexactly(ln) if ln else b""
    return head[0] & 0x0F, payload


@pytest.fixture()
def server_port(tmp_path):
    async def _noop():
        pass

    holder = {}

    async def start():
        web_root = tmp_path / "web"
        web_root.mkdir()
        (web_root / "index.html").write_text("<html><body>table</body></html>")
        (web_root / "app.js").write_text("console.log('ready')")
        config = ServerConfig(port=0, seed=11, act_timeout=0,
                              web_root=str(web_root), autofill="greedy")
        server = GuandanServer(config)
        await server.start()
        holder["server"] = server
        return server.port

    loop = asyncio.new_event_loop()
    try:
        port = loop.run_until_complete(start())
        yield loop, port, holder["server"]
    finally:
        loop.run_until_complete(holder["server"].close())
        loop.run_until_complete(_noop())
        loop.close()


def test_ndjson_full_series():
    # four socket clients on a plain server (no autofill) play one match out
    async def scenario():
        server = GuandanServer(ServerConfig(port=0, seed=21, act_timeout=0))
        await server.start()
        port = server.port
        sessions = []
        tasks = []
        creator = WireAgentSession(RandomAgent(1), "c", seat=0, create_rounds=1)
        sessions.append(creator)
        tasks.append(asyncio.create_task(run_bot_client("127.0.0.1", port, creator)))
        await asyncio.sleep(0.2)
        for seat in (1, 2, 3):
            s = WireAgentSession(GreedyAgent(), f"u{seat}",
                                 room_id=creator.room_id, seat=seat)
            sessions.append(s)
            tasks.append(asyncio.create_task(run_bot_client("127.0.0.1", port, s)))
        await asyncio.wait_for(asyncio.gather(*tasks), timeout=90)
        await server.close()
        return sessions

    sessions = asyncio.new_event_loop().run_until_complete(scenario())
    assert all(s.done for s in sessions)


def test_websocket_human_vs_autofilled_bots(server_port):
    loop, port, _server = server_port

    async def scenario():
        reader, writer = await _ws_connect("127.0.0.1", port)
        session = WireAgentSession(GreedyAgent(), "human", seat=2, create_rounds=1)
        _ws_send(writer, session.hello())
        await writer.drain()
        stages = []
        while not session.done:
            opcode, payload = await asyncio.wait_for(_ws_recv(reader), timeout=60)
            assert opcode == 1
            msg = json.loads(payload)
            if msg.get("type") == "notify":
                stages.append(msg["stage"])
            reply = session.on_message(msg)
            if reply is not None:
                _ws_send(writer, reply)
                await writer.drain()
        writer.close()
        return stages

    stages = loop.run_until_complete(scenario())
    assert "beginning" in stages
    assert "gameResult" in stages


def test_websocket_ping_pong(server_port):
    loop, port, _server = server_port

    async def scenario():
        reader, writer = await _ws_connect("127.0.0.1", port)
        mask = os.urandom(4)
        body = b"hi"
        payload = bytes(b ^ mask[i & 3] for i, b in enumerate(body))
        writer.write(bytes([0x89, 0x80 | len(body)]) + mask + payload)
        await writer.drain()
        opcode, echoed = await asyncio.wait_for(_ws_recv(reader), timeout=5)
        writer.close()
        return opcode, echoed

    opcode, echoed = loop.run_until_complete(scenario())
    assert opcode == 10 and echoed == b"hi"


def test_http_static_and_404(server_port):
    loop, port, _server = server_port

    async def fetch(path):
        reader, writer = await asyncio.open_connection("127.0.0.1", port)
        writer.write(f"GET {path} HTTP/1.1\r\nHost: x\r\n\r\n".encode())
        await writer.drain()
        data = await reader.read()
        writer.close()
        return data

    index = loop.run_until_complete(fetch("/"))
    assert index.startswith(b"HTTP/1.1 200") and b"table" in index
    js = loop.run_until_complete(fetch("/app.js"))
    assert b"ready" in js and b"javascript" in js.lower()
    missing = loop.run_until_complete(fetch("/nope.js"))
    assert missing.startswith(b"HTTP/1.1 404")
    traversal = loop.run_until_complete(fetch("/../secrets"))
    assert traversal.startswith(b"HTTP/1.1 404")


def test_ndjson_error_reply_for_garbage(server_port):
    loop, port, _server = server_port

    async def scenario():
        reader, writer = await asyncio.open_connection("127.0.0.1", port, limit=1 << 24)
        writer.write(b"this is not json\n")
        await writer.drain()
        line = await asyncio.wait_for(reader.readline(), timeout=5)
        writer.close()
        return json.loads(line)

    msg = loop.run_until_complete(scenario())
    assert msg["type"] == "error" and msg["code"] == "bad-json"


def test_cli_bots_verb_fills_and_plays_a_room(tmp_path):
    import socket
    import subprocess
    import sys
    import time

    port = 9741
    server = subprocess.Popen(
        [sys.executable, "-m", "guandan.cli", "serve", "--port", str(port),
         "--seed", "13", "--act-timeout", "0"],
        stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
    try:
        for _ in range(50):
            try:
                socket.create_connection(("127.0.0.1", port), timeout=0.3).close()
                break
            except OSError:
                time.sleep(0.2)
        out = subprocess.run(
            [sys.executable, "-m", "guandan.cli", "bots", "--port", str(port),
             "--seats", "0,1,2,3", "--agent", "greedy", "--matches", "1"],
            capture_output=True, text=True, timeout=120)
        assert out.returncode == 0, out.stderr
        assert "created room" in out.stdout
    finally:
        server.terminate()
        server.wait(timeout=10)
