"""WebSocket control service: touch messages in, state broadcasts out.

Protocol (one JSON object per text message):

    inbound   {"type": "touch", "x": int, "y": int, "z": int, "finger": bool}
    outbound  {"type": "state", "levels": [5 ints], "rgb": [3 ints]}
              {"type": "layout", ...geometry fields...}
              {"type": "error", "message": str}

A new client first receives the current state snapshot, then the slider
layout so it can draw the band markings to scale. All client events funnel
through one queue into a single state-owning consumer; broadcasts fan out
read-only snapshots after each rate-limiter flush.
"""

from __future__ import annotations

import asyncio
import json
import logging
import time
from typing import Callable

from websockets.asyncio.server import broadcast, serve as ws_serve

from .frames import COORD_MAX, PRESSURE_MAX, TouchSample
from .lights import ChannelId, LightCommand, LightState, blend_display
from .pipeline import Batch, Metrics, RateLimiter, TICK_PERIOD_MS, Update
from .sliders import EngineConfig, EngineState, apply_sample

log = logging.getLogger(__name__)


def _now_ms() -> int:
    return time.monotonic_ns() // 1_000_000


def parse_touch_message(raw: str | bytes) -> TouchSample:
    """Validate an inbound client message; raises ValueError with a reason."""
    try:
        obj = json.loads(raw)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValueError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or obj.get("type") != "touch":
        raise ValueError("expected a message with type 'touch'")
    fields = {}
    for name, upper in (("x", COORD_MAX), ("y", COORD_MAX), ("z", PRESSURE_MAX)):
        value = obj.get(name)
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValueError(f"field {name!r} must be an integer")
        if not 0 <= value <= upper:
            raise ValueError(f"field {name!r} outside 0..{upper}")
        fields[name] = value
    finger = obj.get("finger")
    if not isinstance(finger, bool):
        raise ValueError("field 'finger' must be a boolean")
    return TouchSample(finger=finger, **fields)


class LightServer:
    """Holds engine and light state; serves any number of WebSocket clients."""

    def __init__(
        self,
        config: EngineConfig | None = None,
        tick_period_ms: int = TICK_PERIOD_MS,
        clock: Callable[[], int] = _now_ms,
    ):
        self.config = config or EngineConfig()
        self.engine = EngineState(levels=(0,) * self.config.layout.slider_count)
        self.light = LightState()
        self.limiter = RateLimiter(tick_period_ms)
        self.tick_period_ms = tick_period_ms
        self.metrics = Metrics()
        self.clock = clock
        self.port: int | None = None
        self._connections: set = set()
        self._queue: asyncio.Queue | None = None

    # --- outbound messages

    def state_message(self) -> str:
        return json.dumps(
            {
                "type": "state",
                "levels": list(self.light.levels),
                "rgb": list(blend_display(self.light)),
            }
        )

    def layout_message(self) -> str:
        layout = self.config.layout
        return json.dumps(
            {
                "type": "layout",
                "slider_count": layout.slider_count,
                "band_width": layout.band_width,
                "gap_width": layout.gap_width,
                "x_max": layout.x_max,
                "y_max": layout.y_max,
                "level_count": layout.level_count,
                "y_inverted": layout.y_inverted,
            }
        )

    # --- event loop

    def _emit(self, batch: Batch | None) -> None:
        if batch is None or not batch.updates:
            return
        self.metrics.batches_out += 1
        for update in batch.updates:
            cmd = LightCommand(channel=ChannelId(update.channel), level=update.level)
            self.light = self.light.apply(cmd)
            self.metrics.record_command(batch.t_ms - update.t_ms)
        broadcast(self._connections, self.state_message())

    async def _consume(self) -> None:
        assert self._queue is not None
        while True:
            ws, raw = await self._queue.get()
            try:
                sample = parse_touch_message(raw)
            except ValueError as exc:
                log.debug("bad message from %s: %s", ws.remote_address, exc)
                try:
                    await ws.send(json.dumps({"type": "error", "message": str(exc)}))
                except Exception:
                    pass  # client already gone
                continue
            self.metrics.samples_in += 1
            now = self.clock()
            self.engine, changes = apply_sample(self.engine, sample, self.config)
            for change in changes:
                self._emit(self.limiter.push(Update(change.channel, change.level, now)))

    async def _ticker(self) -> None:
        # poll at half the tick so a deferred flush lands close to its deadline
        while True:
            await asyncio.sleep(self.tick_period_ms / 2000)
            self._emit(self.limiter.poll(self.clock()))

    async def _handler(self, ws) -> None:
        assert self._queue is not None
        self._connections.add(ws)
        log.info("client connected: %s", ws.remote_address)
        try:
            await ws.send(self.state_message())
            await ws.send(self.layout_message())
            async for raw in ws:
                await self._queue.put((ws, raw))
        finally:
            self._connections.discard(ws)
            log.info("client disconnected: %s", ws.remote_address)

    async def run(
        self,
        host: str = "127.0.0.1",
        port: int = 8765,
        on_listening: Callable[[str, int], None] | None = None,
    ) -> None:
        """Serve until cancelled. Port 0 binds an ephemeral port."""
        self._queue = asyncio.Queue()
        async with ws_serve(self._handler, host, port) as server:
            self.port = server.sockets[0].getsockname()[1]
            if on_listening is not None:
                on_listening(host, self.port)
            tasks = [
                asyncio.create_task(self._consume()),
                asyncio.create_task(self._ticker()),
            ]
            try:
                await asyncio.Future()
            finally:
                for task in tasks:
                    task.cancel()
