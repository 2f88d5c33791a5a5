"""Controller loop: trace or byte-stream input, engine, rate-limited command sink.

Replay runs on a virtual clock driven entirely by record timestamps, so a
replay is a pure function of (trace, config, limiter flag). The rate
limiter coalesces updates latest-wins per channel and emits at most one
batch per tick, matching the 40 updates/s ceiling of the original device
chain; the deferred-flush timestamp is the tick deadline itself, exactly
as a live timer would fire it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

from .errors import TraceFormatError
from .frames import COORD_MAX, PRESSURE_MAX, Diagnostic, StreamDecoder, TouchSample
from .lights import ChannelId, LightCommand, LightState, encode_command
from .sliders import ChannelChange, EngineConfig, EngineState, apply_sample

TICK_PERIOD_MS = 25  # 40 batches per second


@dataclass(frozen=True)
class TraceRecord:
    """One replayable input event; t_ms counts from trace start."""

    t_ms: int
    x: int
    y: int
    z: int
    finger: bool

    def sample(self) -> TouchSample:
        return TouchSample(x=self.x, y=self.y, z=self.z, finger=self.finger, t_ms=self.t_ms)


_TRACE_FIELDS = {"t_ms": int, "x": int, "y": int, "z": int, "finger": bool}
_TRACE_RANGES = {"x": COORD_MAX, "y": COORD_MAX, "z": PRESSURE_MAX}


def parse_trace_line(line: str, line_no: int) -> TraceRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceFormatError(line_no, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise TraceFormatError(line_no, "record is not a JSON object")
    values = {}
    for name, kind in _TRACE_FIELDS.items():
        if name not in obj:
            raise TraceFormatError(line_no, f"missing field {name!r}")
        value = obj[name]
        if kind is int:
            # bool is an int subclass; reject it explicitly
            if isinstance(value, bool) or not isinstance(value, int):
                raise TraceFormatError(line_no, f"field {name!r} must be an integer")
        elif not isinstance(value, bool):
            raise TraceFormatError(line_no, f"field {name!r} must be a boolean")
        values[name] = value
    if values["t_ms"] < 0:
        raise TraceFormatError(line_no, "t_ms must be non-negative")
    for name, upper in _TRACE_RANGES.items():
        if not 0 <= values[name] <= upper:
            raise TraceFormatError(line_no, f"field {name!r} outside 0..{upper}")
    return TraceRecord(**values)


def read_trace(lines: Iterable[str]) -> list[TraceRecord]:
    """Parse trace lines; '#' comment lines and blank lines are ignored.

    Records must be time-ordered (non-decreasing t_ms).
    """
    records: list[TraceRecord] = []
    last_t = 0
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        record = parse_trace_line(line, line_no)
        if records and record.t_ms < last_t:
            raise TraceFormatError(line_no, f"t_ms={record.t_ms} goes back in time (last {last_t})")
        last_t = record.t_ms
        records.append(record)
    return records


def format_trace_record(record: TraceRecord) -> str:
    return json.dumps(
        {"t_ms": record.t_ms, "x": record.x, "y": record.y, "z": record.z, "finger": record.finger}
    )


@dataclass(frozen=True)
class Update:
    """A channel change stamped with the virtual time it was produced."""

    channel: int
    level: int
    t_ms: int


@dataclass(frozen=True)
class Batch:
    """One rate-limiter emission: coalesced updates plus the emission time."""

    t_ms: int
    updates: tuple[Update, ...]


class RateLimiter:
    """Latest-wins coalescing with at most one emitted batch per tick.

    A push flushes immediately when a full tick has elapsed since the last
    emission (or nothing was ever emitted); otherwise it joins the pending
    set, replacing any older update for the same channel. poll() stands in
    for the live timer: once the tick deadline passes, pending updates are
    flushed with the deadline as their emission time.
    """

    def __init__(self, tick_period_ms: int = TICK_PERIOD_MS):
        if tick_period_ms < 1:
            raise ValueError("tick_period_ms must be >= 1")
        self.tick_period_ms = tick_period_ms
        self._pending: dict[int, Update] = {}
        self._last_emit_ms: int | None = None

    def _flush(self, t_ms: int) -> Batch:
        batch = Batch(t_ms=t_ms, updates=tuple(self._pending.values()))
        self._pending.clear()
        self._last_emit_ms = t_ms
        return batch

    def push(self, update: Update) -> Batch | None:
        """Accept a change at its own timestamp; maybe emit a batch."""
        if update.channel in self._pending:
            del self._pending[update.channel]  # re-insert to keep newest last
        self._pending[update.channel] = update
        if self._last_emit_ms is None or update.t_ms - self._last_emit_ms >= self.tick_period_ms:
            return self._flush(update.t_ms)
        return None

    def poll(self, now_ms: int) -> Batch | None:
        """Flush pending updates whose tick deadline has passed."""
        if not self._pending:
            return None
        deadline = self.deadline_ms
        if deadline is not None and now_ms >= deadline:
            return self._flush(deadline)
        return None

    def finish(self) -> Batch | None:
        """End of input: flush any remaining pending batch at its deadline."""
        if not self._pending:
            return None
        assert self.deadline_ms is not None
        return self._flush(self.deadline_ms)

    @property
    def deadline_ms(self) -> int | None:
        """Virtual time of the next timer flush, if something is pending."""
        if not self._pending:
            return None
        if self._last_emit_ms is None:
            return min(u.t_ms for u in self._pending.values())
        return self._last_emit_ms + self.tick_period_ms


@dataclass
class Metrics:
    """Pipeline counters; latency is source-timestamp to command-emit."""

    samples_in: int = 0
    frames_bad: int = 0
    commands_out: int = 0
    batches_out: int = 0
    max_latency_ms: int = 0
    latency_total_ms: int = 0

    @property
    def mean_latency_ms(self) -> float:
        if self.commands_out == 0:
            return 0.0
        return self.latency_total_ms / self.commands_out

    def record_command(self, latency_ms: int) -> None:
        self.commands_out += 1
        self.latency_total_ms += latency_ms
        if latency_ms > self.max_latency_ms:
            self.max_latency_ms = latency_ms

    def as_dict(self) -> dict:
        return {
            "samples_in": self.samples_in,
            "frames_bad": self.frames_bad,
            "commands_out": self.commands_out,
            "batches_out": self.batches_out,
            "max_latency_ms": self.max_latency_ms,
            "mean_latency_ms": round(self.mean_latency_ms, 3),
        }


@dataclass
class ReplayResult:
    state: LightState
    log: list[tuple[int, LightCommand]]
    metrics: Metrics


def format_command_log(log: Iterable[tuple[int, LightCommand]]) -> list[str]:
    """One line per command: 't_ms HEX6', e.g. '0 C016D6'."""
    return [f"{t_ms} {encode_command(cmd).hex().upper()}" for t_ms, cmd in log]


class _CommandSink:
    """Shared replay core: fold changes through the limiter into a log."""

    def __init__(self, limiter_on: bool, tick_period_ms: int, metrics: Metrics):
        self.limiter = RateLimiter(tick_period_ms) if limiter_on else None
        self.metrics = metrics
        self.light = LightState()
        self.log: list[tuple[int, LightCommand]] = []

    def _emit(self, batch: Batch | None) -> None:
        if batch is None or not batch.updates:
            return
        self.metrics.batches_out += 1
        for update in batch.updates:
            cmd = LightCommand(channel=ChannelId(update.channel), level=update.level)
            self.light = self.light.apply(cmd)
            self.log.append((batch.t_ms, cmd))
            self.metrics.record_command(batch.t_ms - update.t_ms)

    def advance(self, now_ms: int) -> None:
        if self.limiter is not None:
            self._emit(self.limiter.poll(now_ms))

    def submit(self, changes: list[ChannelChange], t_ms: int) -> None:
        for change in changes:
            update = Update(channel=change.channel, level=change.level, t_ms=t_ms)
            if self.limiter is not None:
                self._emit(self.limiter.push(update))
            else:
                self._emit(Batch(t_ms=t_ms, updates=(update,)))

    def close(self) -> None:
        if self.limiter is not None:
            self._emit(self.limiter.finish())


def run_replay(
    trace: Iterable[TraceRecord],
    config: EngineConfig | None = None,
    limiter_on: bool = True,
    tick_period_ms: int = TICK_PERIOD_MS,
) -> ReplayResult:
    """Replay a time-ordered trace into a command log, deterministically.

    The final light state is identical with the limiter on or off;
    coalescing only drops superseded intermediate values.
    """
    config = config or EngineConfig()
    metrics = Metrics()
    sink = _CommandSink(limiter_on, tick_period_ms, metrics)
    state = EngineState(levels=(0,) * config.layout.slider_count)
    for record in trace:
        metrics.samples_in += 1
        sink.advance(record.t_ms)
        state, changes = apply_sample(state, record.sample(), config)
        sink.submit(changes, record.t_ms)
    sink.close()
    return ReplayResult(state=sink.light, log=sink.log, metrics=metrics)


def run_byte_stream(
    data: bytes,
    config: EngineConfig | None = None,
    limiter_on: bool = False,
    frame_period_ms: int = TICK_PERIOD_MS,
) -> ReplayResult:
    """Replay a raw frame stream; decoded samples are paced at the nominal
    device rate (one frame per frame_period_ms) to keep the run deterministic.

    Decoder diagnostics are counted in metrics.frames_bad 1:1.
    """
    config = config or EngineConfig()
    metrics = Metrics()
    sink = _CommandSink(limiter_on, frame_period_ms, metrics)
    state = EngineState(levels=(0,) * config.layout.slider_count)

    # the decoder calls the clock once per emitted sample
    ticks = itertools.count()
    decoder = StreamDecoder(clock=lambda: next(ticks) * frame_period_ms)
    for event in decoder.feed(data):
        if isinstance(event, Diagnostic):
            metrics.frames_bad += 1
            continue
        metrics.samples_in += 1
        sink.advance(event.t_ms)
        state, changes = apply_sample(state, event, config)
        sink.submit(changes, event.t_ms)
    sink.close()
    return ReplayResult(state=sink.light, log=sink.log, metrics=metrics)
