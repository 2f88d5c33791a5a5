"""Virtual-slider lighting controller: touch frames in, RGBYW light commands out."""

from .errors import ChecksumError, FramingError, RangeError, TraceFormatError
from .frames import Diagnostic, StreamDecoder, TouchSample, decode_frame, encode_frame
from .lights import (
    ChannelId,
    LightCommand,
    LightState,
    blend_display,
    decode_command,
    encode_command,
)
from .pipeline import (
    Metrics,
    RateLimiter,
    ReplayResult,
    TICK_PERIOD_MS,
    TraceRecord,
    format_command_log,
    format_trace_record,
    read_trace,
    run_byte_stream,
    run_replay,
)
from .sliders import (
    ChannelChange,
    EngineConfig,
    EngineState,
    SliderLayout,
    apply_sample,
    locate_slider,
    quantize_level,
    reset,
    sweep,
)

__version__ = "0.1.0"
