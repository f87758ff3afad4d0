"""Asyncio server for the room protocol.

One listening port serves three kinds of clients, distinguished by sniffing
the first bytes of each connection:

* newline-delimited JSON over a raw socket (headless agents),
* WebSocket (one JSON object per text frame, for the browser UI),
* plain HTTP GET (static files for the UI, when a web root is configured).

All hall/room work runs on the event loop, which serializes events within a
room. Optional per-act timeouts abort a room whose awaited seat stalls.
"""

from __future__ import annotations

import asyncio
import base64
import hashlib
import json
import logging
import mimetypes
import os
from dataclasses import dataclass
from typing import Optional

from ..agents import make_agent
from .client import WireAgentSession
from .room import Hall

log = logging.getLogger("guandan.server")

_WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"


@dataclass
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 9617
    max_rooms: int = 64
    seed: Optional[int] = None
    web_root: Optional[str] = None
    autofill: Optional[str] = None      # agent name for empty seats on create
    act_timeout: float = 30.0           # seconds; 0 disables; sockets only
    ws_act_timeout: float = 0.0         # browser seats: no clock by default


class _Conn:
    """One live client connection of either transport."""

    _next_id = 0

    def __init__(self, writer: asyncio.StreamWriter, kind: str):
        _Conn._next_id += 1
        self.id = f"{kind}-{_Conn._next_id}"
        self.kind = kind  # 'socket' | 'ws' | 'bot'
        self.writer = writer
        self.closed = False

    def __hash__(self):
        return hash(self.id)

    def __eq__(self, other):
        return self is other


class GuandanServer:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.hall = Hall(max_rooms=config.max_rooms, seed=config.seed)
        self._timers: dict[int, asyncio.TimerHandle] = {}
        self._bots: dict[_Conn, WireAgentSession] = {}
        self._server: Optional[asyncio.AbstractServer] = None

    # -- lifecycle ---------------------------------------------------------

    async def start(self) -> None:
        self._server = await asyncio.start_server(
            self._on_connection, self.config.host, self.config.port,
            limit=1 << 24)
        addrs = ", ".join(str(s.getsockname()) for s in self._server.sockets)
        log.info("listening on %s", addrs)

    async def serve_forever(self) -> None:
        if self._server is None:
            await self.start()
        async with self._server:
            await self._server.serve_forever()

    async def close(self) -> None:
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    @property
    def port(self) -> int:
        return self._server.sockets[0].getsockname()[1]

    # -- message routing -----------------------------------------------------

    def _dispatch(self, conn: _Conn, msg: dict) -> None:
        outputs = self.hall.handle(conn, msg)
        self._deliver(outputs)
        if (self.config.autofill and conn.kind != "bot"
                and isinstance(msg, dict) and msg.get("type") == "CREATE_ROOM"):
            for target, message in outputs:
                if target is conn and message.get("type") == "ack":
                    asyncio.get_running_loop().call_soon(
                        self._autofill, message["roomId"])
        self._rearm_timers()

    def _deliver(self, outputs) -> None:
        for target, message in outputs:
            if isinstance(target, _Conn):
                if target.kind == "bot":
                    self._bot_message(target, message)
                else:
                    self._send(target, message)

    def _send(self, conn: _Conn, message: dict) -> None:
        if conn.closed:
            return
        data = json.dumps(message).encode("utf-8")
        try:
            if conn.kind == "ws":
                conn.writer.write(_ws_frame(data))
            else:
                conn.writer.write(data + b"\n")
        except (ConnectionError, RuntimeError):
            conn.closed = True

    def _drop(self, conn: _Conn) -> None:
        conn.closed = True
        outputs = self.hall.disconnect(conn)
        self._deliver(outputs)
        self._rearm_timers()

    # -- per-act timeouts -------------------------------------------------------

    def _rearm_timers(self) -> None:
        loop = asyncio.get_running_loop()
        live = set(self.hall.rooms)
        for room_id in list(self._timers):
            if room_id not in live:
                self._timers.pop(room_id).cancel()
        for room_id, room in self.hall.rooms.items():
            seat = room.awaiting_seat
            handle = self._timers.pop(room_id, None)
            if handle is not None:
                handle.cancel()
            if seat is None or room.seats[seat] is None:
                continue
            conn = room.seats[seat]
            timeout = (self.config.ws_act_timeout if getattr(conn, "kind", "") == "ws"
                       else self.config.act_timeout)
            if timeout and getattr(conn, "kind", "") != "bot":
                self._timers[room_id] = loop.call_later(
                    timeout, self._on_timeout, room_id, seat)

    def _on_timeout(self, room_id: int, seat: int) -> None:
        self._timers.pop(room_id, None)
        room = self.hall.rooms.get(room_id)
        if room is None or room.awaiting_seat != seat:
            return
        log.warning("room %s: seat %s timed out", room_id, seat)
        self._deliver(self.hall.abort_room(room_id, f"seat {seat} timed out"))

    # -- in-process bots -----------------------------------------------------------

    def _bot_message(self, conn: _Conn, message: dict) -> None:
        session = self._bots.get(conn)
        if session is None:
            return
        reply = session.on_message(message)
        if session.done:
            self._bots.pop(conn, None)
        if reply is not None:
            # defer so the current dispatch finishes first
            asyncio.get_running_loop().call_soon(self._dispatch, conn, reply)

    def _autofill(self, room_id: int) -> None:
        room = self.hall.rooms.get(room_id)
        if room is None:
            return
        for seat in range(4):
            if room.seats[seat] is None:
                agent = make_agent(self.config.autofill, seed=seat)
                session = WireAgentSession(agent, f"bot-{seat}",
                                           room_id=room_id, seat=seat)
                conn = _Conn(None, "bot")
                self._bots[conn] = session
                self._dispatch(conn, session.hello())

    # -- connection handling -----------------------------------------------------

    async def _on_connection(self, reader: asyncio.StreamReader,
                             writer: asyncio.StreamWriter) -> None:
        try:
            first = await reader.readline()
        except (ConnectionError, OSError):
            writer.close()
            return
        if not first:
            writer.close()
            return
        head = first.split(b" ", 1)[0]
        if head in (b"GET", b"POST", b"HEAD", b"OPTIONS"):
            await self._serve_http(first, reader, writer)
            return
        await self._serve_ndjson(first, reader, writer)

    async def _serve_ndjson(self, first: bytes, reader: asyncio.StreamReader,
                            writer: asyncio.StreamWriter) -> None:
        conn = _Conn(writer, "socket")
        line = first
        try:
            while line:
                line = line.strip()
                if line:
                    try:
                        msg = json.loads(line)
                    except json.JSONDecodeError:
                        self._send(conn, {"type": "error", "code": "bad-json",
                                          "message": "unparseable line"})
                        msg = None
                    if msg is not None:
                        self._dispatch(conn, msg)
                        await _drain(writer)
                line = await reader.readline()
        except (ConnectionError, OSError):
            pass
        finally:
            self._drop(conn)
            writer.close()

    async def _serve_http(self, first: bytes, reader: asyncio.StreamReader,
                          writer: asyncio.StreamWriter) -> None:
        try:
            request_line = first.decode("latin-1").strip()
            headers = {}
            while True:
                line = await reader.readline()
                if line in (b"\r\n", b"\n", b""):
                    break
                name, _, value = line.decode("latin-1").partition(":")
                headers[name.strip().lower()] = value.strip()
        except (ConnectionError, OSError, UnicodeDecodeError):
            writer.close()
            return
        method, _, rest = request_line.partition(" ")
        path = rest.split(" ")[0] or "/"
        if headers.get("upgrade", "").lower() == "websocket":
            await self._serve_websocket(headers, reader, writer)
            return
        self._serve_static(method, path, writer)
        await _drain(writer)
        writer.close()

    def _serve_static(self, method: str, path: str, writer: asyncio.StreamWriter) -> None:
        if self.config.web_root is None or method not in ("GET", "HEAD"):
            writer.write(_http_response(404, b"not found"))
            return
        rel = path.lstrip("/") or "index.html"
        rel = rel.split("?")[0]
        full = os.path.realpath(os.path.join(self.config.web_root, rel))
        root = os.path.realpath(self.config.web_root)
        if not full.startswith(root + os.sep) and full != root:
            writer.write(_http_response(404, b"not found"))
            return
        if os.path.isdir(full):
            full = os.path.join(full, "index.html")
        if not os.path.isfile(full):
            writer.write(_http_response(404, b"not found"))
            return
        ctype = mimetypes.guess_type(full)[0] or "application/octet-stream"
        with open(full, "rb") as f:
            body = f.read()
        writer.write(_http_response(200, body if method == "GET" else b"", ctype,
                                    content_length=len(body)))

    async def _serve_websocket(self, headers: dict, reader: asyncio.StreamReader,
                               writer: asyncio.StreamWriter) -> None:
        key = headers.get("sec-websocket-key")
        if not key:
            writer.write(_http_response(400, b"missing websocket key"))
            writer.close()
            return
        accept = base64.b64encode(
            hashlib.sha1((key + _WS_GUID).encode()).digest()).decode()
        writer.write(
            b"HTTP/1.1 101 Switching Protocols\r\n"
            b"Upgrade: websocket\r\nConnection: Upgrade\r\n"
            b"Sec-WebSocket-Accept: " + accept.encode() + b"\r\n\r\n")
        await _drain(writer)
        conn = _Conn(writer, "ws")
        try:
            buffer = b""
            while True:
                frame = await _ws_read_frame(reader)
                if frame is None:
                    break
                opcode, payload, fin = frame
                if opcode == 8:       # close
                    writer.write(_ws_frame(b"", opcode=8))
                    break
                if opcode == 9:       # ping
                    writer.write(_ws_frame(payload, opcode=10))
                    await _drain(writer)
                    continue
                if opcode in (1, 0):  # text / continuation
                    buffer += payload
                    if not fin:
                        continue
                    data, buffer = buffer, b""
                    try:
                        msg = json.loads(data.decode("utf-8"))
                    except (json.JSONDecodeError, UnicodeDecodeError):
                        self._send(conn, {"type": "error", "code": "bad-json",
                                          "message": "unparseable frame"})
                        continue
                    self._dispatch(conn, msg)
                    await _drain(writer)
        except (ConnectionError, OSError, asyncio.IncompleteReadError):
            pass
        finally:
            self._drop(conn)
            writer.close()


def _http_response(status: int, body: bytes, ctype: str = "text/plain",
                   content_length: Optional[int] = None) -> bytes:
    reason = {200: "OK", 400: "Bad Request", 404: "Not Found"}.get(status, "")
    length = content_length if content_length is not None else len(body)
    head = (f"HTTP/1.1 {status} {reason}\r\nContent-Type: {ctype}\r\n"
            f"Content-Length: {length}\r\nConnection: close\r\n\r\n")
    return head.encode("latin-1") + body


def _ws_frame(payload: bytes, opcode: int = 1) -> bytes:
    header = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        header += bytes([n])
    elif n < 1 << 16:
        header += bytes([126]) + n.to_bytes(2, "big")
    else:
        header += bytes([127]) + n.to_bytes(8, "big")
    return header + payload


async def _ws_read_frame(reader: asyncio.StreamReader):
    try:
        head = await reader.readexactly(2)
    except (asyncio.IncompleteReadError, ConnectionError, OSError):
        return None
    fin = bool(head[0] & 0x80)
    opcode = head[0] & 0x0F
    masked = bool(head[1] & 0x80)
    length = head[1] & 0x7F
    if length == 126:
        length = int.from_bytes(await reader.readexactly(2), "big")
    elif length == 127:
        length = int.from_bytes(await reader.readexactly(8), "big")
    mask = await reader.readexactly(4) if masked else b"\x00" * 4
    payload = await reader.readexactly(length) if length else b""
    if masked and length:
        payload = bytes(b ^ mask[i & 3] for i, b in enumerate(payload))
    return opcode, payload, fin


async def _drain(writer: asyncio.StreamWriter) -> None:
    try:
        await writer.drain()
    except (ConnectionError, OSError):
        pass


async def run_server(config: ServerConfig) -> None:
    server = GuandanServer(config)
    await server.serve_forever()
