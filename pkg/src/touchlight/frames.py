"""Touch frame codec: 6-byte wire frames and a resynchronizing stream decoder.

Frame layout (big-endian coordinates, 13 bits each):

    byte 0   1000000F    sync pattern; F = finger-present flag
    byte 1   000XXXXX    x bits 12..8
    byte 2   XXXXXXXX    x bits 7..0
    byte 3   000YYYYY    y bits 12..8
    byte 4   YYYYYYYY    y bits 7..0
    byte 5   ZZZZZZZZ    pressure

Timestamps are never carried on the wire; the stream decoder stamps each
sample from its clock when the frame completes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable, Union

from .errors import FramingError, RangeError

FRAME_SIZE = 6
SYNC_BASE = 0x80
SYNC_MASK = 0xFE  # bits 7..1 of byte 0 are fixed
HIGH_BITS_MASK = 0xE0  # bytes 1 and 3 carry only 5 payload bits
COORD_MAX = 6143  # 0x17FF
PRESSURE_MAX = 255


@dataclass(frozen=True)
class TouchSample:
    """One decoded touch event.

    When ``finger`` is False, x/y/z hold the last-known contact point and
    must not drive slider changes downstream.
    """

    x: int
    y: int
    z: int
    finger: bool
    t_ms: int = 0


@dataclass(frozen=True)
class Diagnostic:
    """One discarded byte or rejected frame candidate during stream decode."""

    offset: int  # stream offset of the offending byte
    reason: str


def encode_frame(sample: TouchSample) -> bytes:
    """Encode a sample into its 6-byte frame. t_ms is not encoded."""
    if not 0 <= sample.x <= COORD_MAX:
        raise RangeError(f"x={sample.x} outside 0..{COORD_MAX}")
    if not 0 <= sample.y <= COORD_MAX:
        raise RangeError(f"y={sample.y} outside 0..{COORD_MAX}")
    if not 0 <= sample.z <= PRESSURE_MAX:
        raise RangeError(f"z={sample.z} outside 0..{PRESSURE_MAX}")
    return bytes(
        (
            SYNC_BASE | int(sample.finger),
            sample.x >> 8,
            sample.x & 0xFF,
            sample.y >> 8,
            sample.y & 0xFF,
            sample.z,
        )
    )


def decode_frame(frame: bytes) -> TouchSample:
    """Decode exactly 6 octets; inverse of encode_frame on its image.

    The decoded sample carries t_ms=0; callers assign real timestamps.
    """
    if len(frame) != FRAME_SIZE:
        raise FramingError(f"expected {FRAME_SIZE} bytes, got {len(frame)}")
    if frame[0] & SYNC_MASK != SYNC_BASE:
        raise FramingError(f"bad sync byte 0x{frame[0]:02X}")
    if frame[1] & HIGH_BITS_MASK or frame[3] & HIGH_BITS_MASK:
        raise FramingError("high bits set in coordinate-high byte")
    x = (frame[1] << 8) | frame[2]
    y = (frame[3] << 8) | frame[4]
    # 5+8 bits can express up to 8191, beyond the pad's 6143
    if x > COORD_MAX:
        raise RangeError(f"decoded x={x} outside 0..{COORD_MAX}")
    if y > COORD_MAX:
        raise RangeError(f"decoded y={y} outside 0..{COORD_MAX}")
    return TouchSample(x=x, y=y, z=frame[5], finger=bool(frame[0] & 0x01))


def _host_clock_ms() -> int:
    return time.monotonic_ns() // 1_000_000


StreamEvent = Union[TouchSample, Diagnostic]


class StreamDecoder:
    """Byte-at-a-time frame decoder with shift-by-one resynchronization.

    A candidate frame starts at any byte matching the sync pattern. On
    validation failure exactly one byte is discarded and scanning resumes
    at the next byte, so desynchronization after corruption stays bounded.
    Every discarded byte surfaces as a Diagnostic; nothing is fatal.

    Single-owner state: may be moved between threads, never shared.
    """

    def __init__(self, clock: Callable[[], int] | None = None):
        self._buf = bytearray()
        self._offset = 0  # stream offset of _buf[0]
        self._clock = clock if clock is not None else _host_clock_ms

    def push(self, byte: int) -> list[StreamEvent]:
        """Feed one byte; return samples and diagnostics it completed."""
        self._buf.append(byte)
        out: list[StreamEvent] = []
        while self._buf:
            if self._buf[0] & SYNC_MASK != SYNC_BASE:
                out.append(Diagnostic(self._offset, f"no sync (0x{self._buf[0]:02X})"))
                self._drop(1)
                continue
            if len(self._buf) < FRAME_SIZE:
                break
            try:
                sample = decode_frame(bytes(self._buf[:FRAME_SIZE]))
            except (FramingError, RangeError) as exc:
                out.append(Diagnostic(self._offset, str(exc)))
                self._drop(1)
                continue
            out.append(replace(sample, t_ms=self._clock()))
            self._drop(FRAME_SIZE)
        return out

    def feed(self, data: bytes) -> list[StreamEvent]:
        """Feed a chunk of bytes; equivalent to pushing them one by one."""
        out: list[StreamEvent] = []
        for byte in data:
            out.extend(self.push(byte))
        return out

    def _drop(self, n: int) -> None:
        del self._buf[:n]
        self._offset += n
