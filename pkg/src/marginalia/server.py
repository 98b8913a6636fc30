"""Cross-device relay: WebSocket connection handling, event sequencing into
the single-writer engine loop, delta fan-out, and full-state resync.

Clients send raw input events; the engine is the only writer. Every client
receives the same ordered delta stream, numbered contiguously so a gap is
detectable and recoverable via a resync request.
"""

from __future__ import annotations

import asyncio
import contextlib
import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.staticfiles import StaticFiles

from . import events as ev
from . import protocol as proto
from .engine import EngineConfig, Session
from .events import MalformedEvent, validate_event
from .ingest import LectureBundle, slide_event_id
from .trace import TraceWriter

log = logging.getLogger("marginalia.server")

DELTA_BUFFER = 4096  # queued envelopes per client before it is dropped


@dataclass
class _Client:
    client_id: int
    role: str
    socket: WebSocket
    outbox: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(maxsize=DELTA_BUFFER))
    dropped: bool = False


class RelayServer:
    def __init__(
        self,
        bundle: LectureBundle,
        config: EngineConfig | None = None,
        *,
        speed: float = 1.0,
        autostart: bool = False,
        record_path: str | Path | None = None,
        tick_hz: float = 30.0,
    ) -> None:
        self.bundle = bundle
        self.session = Session(bundle, config)
        self.speed = speed
        self.autostart = autostart
        self.tick_hz = tick_hz
        self.recorder = TraceWriter(record_path) if record_path else None
        self.clients: dict[int, _Client] = {}
        self.roles: dict[str, int] = {}
        self.broadcast_seq = 0
        self._ids = itertools.count(1)
        self._queue: asyncio.Queue = asyncio.Queue()
        self._engine_task: asyncio.Task | None = None
        self._clock_task: asyncio.Task | None = None

    # ------------------------------------------------------------------
    # lifecycle

    async def start(self) -> None:
        self._engine_task = asyncio.create_task(self._engine_loop(), name="engine-loop")
        if self.autostart:
            self.start_clock()

    async def stop(self) -> None:
        for task in (self._engine_task, self._clock_task):
            if task is not None:
                task.cancel()
                with contextlib.suppress(asyncio.CancelledError):
                    await task
        if self.recorder is not None:
            self.recorder.close()

    def start_clock(self) -> None:
        if self._clock_task is None or self._clock_task.done():
            self._clock_task = asyncio.create_task(self._clock_loop(), name="clock-loop")
            log.info("clock started at speed %.3g", self.speed)

    # ------------------------------------------------------------------
    # engine loop: the one place state mutates

    async def _engine_loop(self) -> None:
        while True:
            client_id, event = await self._queue.get()
            try:
                result = self.session.handle_event(event)
            except Exception:
                # Engine steps are deterministic; a crash here is a bug, but
                # one bad event must not take down the whole live session.
                log.exception("engine step failed on %r", event)
                origin = self.clients.get(client_id) if client_id is not None else None
                if origin is not None:
                    self._enqueue(origin, proto.error("EngineFault", "event rejected"))
                continue
            if self.recorder is not None:
                self.recorder.append(result.seq, self.session.clock_ms, event)
            origin = self.clients.get(client_id) if client_id is not None else None
            if origin is not None:
                self._enqueue(origin, proto.ack(result.seq))
                if result.error is not None:
                    self._enqueue(
                        origin, proto.error(result.error["code"], result.error["message"])
                    )
            if result.changes or result.effects:
                self.broadcast_seq += 1
                envelope = proto.delta(
                    self.broadcast_seq,
                    result.seq,
                    self.session.clock_ms,
                    result.effects,
                    result.changes,
                )
                for client in list(self.clients.values()):
                    self._enqueue(client, envelope)

    async def _clock_loop(self) -> None:
        tick_s = 1.0 / self.tick_hz
        target = float(self.session.clock_ms)
        duration = self.bundle.duration_ms
        while target < duration:
            await asyncio.sleep(tick_s)
            target = min(float(duration), target + tick_s * 1000.0 * self.speed)
            await self._queue.put((None, ev.clock(int(target))))
        log.info("lecture clock reached the end (%d ms)", duration)

    def _snapshot_envelope(self) -> dict:
        return proto.full_state(self.session.full_state(), self.broadcast_seq)

    def _enqueue(self, client: _Client, envelope: dict) -> None:
        if client.dropped:
            return
        try:
            client.outbox.put_nowait(envelope)
        except asyncio.QueueFull:
            client.dropped = True
            log.warning("client %d (%s) too slow; dropping", client.client_id, client.role)
            asyncio.get_running_loop().create_task(self._close(client))

    async def _close(self, client: _Client) -> None:
        self._unregister(client)
        with contextlib.suppress(Exception):
            await client.socket.close()

    def _unregister(self, client: _Client) -> None:
        self.clients.pop(client.client_id, None)
        if self.roles.get(client.role) == client.client_id:
            del self.roles[client.role]

    # ------------------------------------------------------------------
    # per-connection handling

    async def handle_connection(self, socket: WebSocket) -> None:
        await socket.accept()
        try:
            first = proto.decode(await socket.receive_text())
            role = proto.check_hello(first)
        except proto.ProtocolError as exc:
            await socket.send_text(proto.encode(proto.error(exc.code, exc.message)))
            await socket.close()
            return
        except WebSocketDisconnect:
            return
        if role in proto.EXCLUSIVE_ROLES and role in self.roles:
            await socket.send_text(
                proto.encode(proto.error("RoleTaken", f"a {role} is already connected"))
            )
            await socket.close()
            return

        client = _Client(client_id=next(self._ids), role=role, socket=socket)
        self.clients[client.client_id] = client
        if role in proto.EXCLUSIVE_ROLES:
            self.roles[role] = client.client_id
        self._enqueue(client, self._snapshot_envelope())
        log.info("client %d connected as %s", client.client_id, role)

        sender = asyncio.create_task(self._sender(client))
        try:
            await self._receiver(client)
        except WebSocketDisconnect:
            pass
        finally:
            sender.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await sender
            self._unregister(client)
            log.info("client %d (%s) disconnected", client.client_id, role)

    async def _sender(self, client: _Client) -> None:
        try:
            while True:
                envelope = await client.outbox.get()
                await client.socket.send_text(proto.encode(envelope))
        except (WebSocketDisconnect, RuntimeError):
            pass  # receiver side tears the connection down

    async def _receiver(self, client: _Client) -> None:
        while True:
            text = await client.socket.receive_text()
            try:
                envelope = proto.decode(text)
            except proto.ProtocolError as exc:
                self._enqueue(client, proto.error(exc.code, exc.message))
                continue
            kind = envelope.get("kind")
            if kind == proto.KIND_EVENT:
                try:
                    event = validate_event(envelope.get("event"))
                except MalformedEvent as exc:
                    self._enqueue(client, proto.error("MalformedEvent", str(exc)))
                    continue
                await self._queue.put((client.client_id, event))
            elif kind == proto.KIND_RESYNC:
                self._enqueue(client, self._snapshot_envelope())
            elif kind == proto.KIND_CONTROL:
                if envelope.get("action") == "start":
                    self.start_clock()
                else:
                    self._enqueue(
                        client,
                        proto.error("UnknownControl", f"action {envelope.get('action')!r}"),
                    )
            else:
                self._enqueue(client, proto.error("UnexpectedKind", f"{kind!r}"))


def bundle_info(bundle: LectureBundle) -> dict:
    """Static lecture description the UI fetches once at startup."""
    return {
        "title": bundle.title,
        "duration_ms": bundle.duration_ms,
        "slides": [
            {
                "id": slide_event_id(i),
                "t_ms": e.t_ms,
                "image": f"/assets/{e.image_ref}",
                "slide_index": e.slide_index,
                "build_index": e.build_index,
            }
            for i, e in enumerate(bundle.slide_events)
        ],
        "blocks": [
            {
                "block_id": b.block_id,
                "start_ms": b.start_ms,
                "end_ms": b.end_ms,
                "text": b.text,
            }
            for b in bundle.transcript_blocks
        ],
    }


def create_app(server: RelayServer, ui_dir: str | Path | None = None) -> FastAPI:
    import contextlib as _ctx

    @_ctx.asynccontextmanager
    async def lifespan(_: FastAPI):
        await server.start()
        yield
        await server.stop()

    app = FastAPI(lifespan=lifespan)

    @app.websocket("/ws")
    async def ws(socket: WebSocket) -> None:
        await server.handle_connection(socket)

    @app.get("/bundle.json")
    def bundle_json() -> dict:
        return bundle_info(server.bundle)

    if server.bundle.root is not None:
        app.mount("/assets", StaticFiles(directory=server.bundle.root), name="assets")
    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app
