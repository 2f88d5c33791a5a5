"""RGBYW light cluster model: channel ids, 3-byte command codec, display blend.

Command layout:

    byte 0   0xC0 + channel    (0xC0..0xC4)
    byte 1   level             (0x00..0x16)
    byte 2   byte0 XOR byte1   (checksum)

The XOR checksum makes every single-bit corruption detectable.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .errors import ChecksumError, FramingError, RangeError

LEVEL_MAX = 22
COMMAND_SIZE = 3
CMD_BASE = 0xC0


class ChannelId(IntEnum):
    RED = 0
    GREEN = 1
    BLUE = 2
    YELLOW = 3
    WHITE = 4


# Display primaries per channel; yellow and white are additive extras.
_PRIMARIES = {
    ChannelId.RED: (1.0, 0.0, 0.0),
    ChannelId.GREEN: (0.0, 1.0, 0.0),
    ChannelId.BLUE: (0.0, 0.0, 1.0),
    ChannelId.YELLOW: (1.0, 1.0, 0.0),
    ChannelId.WHITE: (1.0, 1.0, 1.0),
}


@dataclass(frozen=True)
class LightCommand:
    """One channel/level update."""

    channel: ChannelId
    level: int


@dataclass(frozen=True)
class LightState:
    """Intensity level 0..22 of each of the 5 channels."""

    levels: tuple[int, ...] = (0, 0, 0, 0, 0)

    def apply(self, cmd: LightCommand) -> "LightState":
        levels = list(self.levels)
        levels[cmd.channel] = cmd.level
        return LightState(levels=tuple(levels))


def encode_command(cmd: LightCommand) -> bytes:
    """Encode a command into its 3-byte wire form."""
    if not 0 <= cmd.level <= LEVEL_MAX:
        raise RangeError(f"level={cmd.level} outside 0..{LEVEL_MAX}")
    b0 = CMD_BASE + ChannelId(cmd.channel)
    return bytes((b0, cmd.level, b0 ^ cmd.level))


def decode_command(data: bytes) -> LightCommand:
    """Decode 3 octets; inverse of encode_command on its image."""
    if len(data) != COMMAND_SIZE:
        raise FramingError(f"expected {COMMAND_SIZE} bytes, got {len(data)}")
    if not CMD_BASE <= data[0] <= CMD_BASE + len(ChannelId) - 1:
        raise FramingError(f"bad header byte 0x{data[0]:02X}")
    if data[1] > LEVEL_MAX:
        raise RangeError(f"level={data[1]} outside 0..{LEVEL_MAX}")
    if data[2] != data[0] ^ data[1]:
        raise ChecksumError(
            f"checksum 0x{data[2]:02X} != 0x{data[0] ^ data[1]:02X}"
        )
    return LightCommand(channel=ChannelId(data[0] - CMD_BASE), level=data[1])


def blend_display(state: LightState) -> tuple[int, int, int]:
    """Additive on-screen blend of all 5 channels into one sRGB triple.

    Channels sum linearly, the result is normalized by its largest
    component when that exceeds 1, and a 1/2.2 gamma maps to 0..255.
    Purely cosmetic; carries no colorimetric claim.
    """
    linear = [0.0, 0.0, 0.0]
    for channel in ChannelId:
        weight = state.levels[channel] / LEVEL_MAX
        primary = _PRIMARIES[channel]
        for c in range(3):
            linear[c] += primary[c] * weight
    norm = max(1.0, max(linear))
    r, g, b = (round(255 * (v / norm) ** (1 / 2.2)) for v in linear)
    return (r, g, b)
