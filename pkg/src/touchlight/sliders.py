"""Virtual slider engine: 5 bands with 4 gaps across x, discrete levels across y.

Positioning is absolute, like a bank of physical dimmers: a touch sets the
band's level from the touch location alone, gaps are dead zones, and a
finger lift leaves every level where it was.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import RangeError
from .frames import TouchSample


@dataclass(frozen=True)
class SliderLayout:
    """Geometry constants partitioning the pad into bands, gaps, and levels.

    Bands and gaps must tile the x axis exactly:
    slider_count * band_width + (slider_count - 1) * gap_width == x_max + 1.
    Band i covers [i * pitch, i * pitch + band_width - 1] with
    pitch = band_width + gap_width; the last band ends at x_max.
    """

    slider_count: int = 5
    band_width: int = 1024
    gap_width: int = 256
    x_max: int = 6143
    y_max: int = 6143
    level_count: int = 23
    y_inverted: bool = False  # False: y == y_max is the top (full intensity)

    def __post_init__(self):
        if self.slider_count < 1 or self.band_width < 1 or self.gap_width < 0:
            raise ValueError("slider_count and band_width must be positive")
        span = (
            self.slider_count * self.band_width
            + (self.slider_count - 1) * self.gap_width
        )
        if span != self.x_max + 1:
            raise ValueError(
                f"bands and gaps must tile 0..{self.x_max} exactly: "
                f"{self.slider_count}*{self.band_width} + "
                f"{self.slider_count - 1}*{self.gap_width} = {span}, "
                f"need {self.x_max + 1}"
            )
        if not 1 <= self.level_count <= self.y_max + 1:
            raise ValueError(f"level_count={self.level_count} outside 1..{self.y_max + 1}")

    @property
    def pitch(self) -> int:
        return self.band_width + self.gap_width


@dataclass(frozen=True)
class EngineConfig:
    """Runtime knobs: pressure gate plus the slider geometry."""

    z_threshold: int = 30  # touches with z below this are ignored
    layout: SliderLayout = field(default_factory=SliderLayout)

    def __post_init__(self):
        if not 0 <= self.z_threshold <= 255:
            raise ValueError(f"z_threshold={self.z_threshold} outside 0..255")


@dataclass(frozen=True)
class EngineState:
    """Current level per channel. Persists across finger lifts."""

    levels: tuple[int, ...] = (0, 0, 0, 0, 0)


@dataclass(frozen=True)
class ChannelChange:
    """One effective level update produced by a sample."""

    channel: int
    level: int


def locate_slider(x: int, layout: SliderLayout | None = None) -> int | None:
    """Map an x coordinate to its band index, or None when in a gap."""
    layout = layout or SliderLayout()
    if not 0 <= x <= layout.x_max:
        raise RangeError(f"x={x} outside 0..{layout.x_max}")
    band, off = divmod(x, layout.pitch)
    return band if off < layout.band_width else None


def quantize_level(y: int, layout: SliderLayout | None = None) -> int:
    """Map a y coordinate to a discrete intensity level.

    level = floor(y' * level_count / (y_max + 1)) with y' flipped when
    y_inverted; monotone in y' and surjective onto 0..level_count-1.
    """
    layout = layout or SliderLayout()
    if not 0 <= y <= layout.y_max:
        raise RangeError(f"y={y} outside 0..{layout.y_max}")
    y_up = layout.y_max - y if layout.y_inverted else y
    return (y_up * layout.level_count) // (layout.y_max + 1)


def reset(state: EngineState) -> EngineState:
    """All levels to zero (cold-start condition)."""
    return EngineState(levels=(0,) * len(state.levels))


def apply_sample(
    state: EngineState, sample: TouchSample, config: EngineConfig
) -> tuple[EngineState, list[ChannelChange]]:
    """Apply one touch sample; returns the new state and the effective change.

    No-ops: finger up, pressure below the gate, or touch inside a gap.
    At most one channel changes, and only when its level actually differs
    (idempotent for a fixed sample). The result depends only on
    (state, sample), never on prior motion history.
    """
    if not sample.finger or sample.z < config.z_threshold:
        return state, []
    band = locate_slider(sample.x, config.layout)
    if band is None:
        return state, []
    level = quantize_level(sample.y, config.layout)
    if state.levels[band] == level:
        return state, []
    levels = list(state.levels)
    levels[band] = level
    return EngineState(levels=tuple(levels)), [ChannelChange(band, level)]


def sweep(
    state: EngineState, samples: list[TouchSample], config: EngineConfig
) -> tuple[EngineState, list[ChannelChange]]:
    """Fold apply_sample over a time-ordered sample list."""
    changes: list[ChannelChange] = []
    for sample in samples:
        state, step = apply_sample(state, sample, config)
        changes.extend(step)
    return state, changes
