"""Replay pipeline: trace parsing, rate limiting, coalescing, metrics."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import build_stream
from touchlight.errors import TraceFormatError
from touchlight.frames import TouchSample
from touchlight.lights import ChannelId, LightCommand
from touchlight.pipeline import (
    Batch,
    RateLimiter,
    TraceRecord,
    Update,
    format_command_log,
    format_trace_record,
    parse_trace_line,
    read_trace,
    run_byte_stream,
    run_replay,
)
from touchlight.sliders import EngineConfig, SliderLayout


class TestTraceParsing:
    def test_round_trip(self):
        record = TraceRecord(t_ms=5, x=1, y=2, z=3, finger=True)
        assert parse_trace_line(format_trace_record(record), 1) == record

    def test_comments_and_blanks_ignored(self):
        lines = ["# header", "", '{"t_ms":0,"x":1,"y":2,"z":3,"finger":false}', "   "]
        assert read_trace(lines) == [TraceRecord(t_ms=0, x=1, y=2, z=3, finger=False)]

    @pytest.mark.parametrize(
        "line",
        [
            "not json",
            "[1,2,3]",
            '{"t_ms":0,"x":1,"y":2,"z":3}',
            '{"t_ms":0,"x":1.5,"y":2,"z":3,"finger":true}',
            '{"t_ms":0,"x":true,"y":2,"z":3,"finger":true}',
            '{"t_ms":0,"x":1,"y":2,"z":3,"finger":1}',
            '{"t_ms":-1,"x":1,"y":2,"z":3,"finger":true}',
            '{"t_ms":0,"x":6144,"y":2,"z":3,"finger":true}',
            '{"t_ms":0,"x":1,"y":2,"z":256,"finger":true}',
        ],
    )
    def test_malformed_records(self, line):
        with pytest.raises(TraceFormatError):
            parse_trace_line(line, 7)

    def test_error_carries_line_number(self):
        lines = ['{"t_ms":0,"x":1,"y":2,"z":3,"finger":true}', "# ok", "garbage"]
        with pytest.raises(TraceFormatError) as err:
            read_trace(lines)
        assert err.value.line_no == 3
        assert "line 3" in str(err.value)

    def test_time_regression_rejected(self):
        lines = [
            '{"t_ms":10,"x":1,"y":2,"z":3,"finger":true}',
            '{"t_ms":9,"x":1,"y":2,"z":3,"finger":true}',
        ]
        with pytest.raises(TraceFormatError) as err:
            read_trace(lines)
        assert err.value.line_no == 2


class TestRateLimiter:
    def test_first_push_emits_immediately(self):
        limiter = RateLimiter()
        batch = limiter.push(Update(0, 22, 0))
        assert batch == Batch(t_ms=0, updates=(Update(0, 22, 0),))

    def test_latest_wins_within_tick(self):
        limiter = RateLimiter()
        limiter.push(Update(0, 1, 0))
        assert limiter.push(Update(0, 5, 5)) is None
        assert limiter.push(Update(0, 9, 10)) is None
        batch = limiter.poll(25)
        assert batch == Batch(t_ms=25, updates=(Update(0, 9, 10),))

    def test_two_channels_one_batch(self):
        limiter = RateLimiter()
        limiter.push(Update(0, 1, 0))
        assert limiter.push(Update(1, 2, 5)) is None
        assert limiter.push(Update(2, 3, 6)) is None
        batch = limiter.poll(30)
        assert batch.t_ms == 25
        assert set(batch.updates) == {Update(1, 2, 5), Update(2, 3, 6)}

    def test_push_on_tick_boundary_emits_immediately(self):
        limiter = RateLimiter()
        limiter.push(Update(0, 1, 0))
        batch = limiter.push(Update(0, 2, 25))
        assert batch == Batch(t_ms=25, updates=(Update(0, 2, 25),))

    def test_poll_flushes_at_deadline_not_now(self):
        # a long input gap must not stretch the deferred command's latency
        limiter = RateLimiter()
        limiter.push(Update(0, 1, 0))
        limiter.push(Update(0, 2, 10))
        batch = limiter.poll(500)
        assert batch.t_ms == 25

    def test_finish_flushes_pending(self):
        limiter = RateLimiter()
        limiter.push(Update(0, 1, 0))
        limiter.push(Update(3, 7, 12))
        batch = limiter.finish()
        assert batch.t_ms == 25
        assert batch.updates == (Update(3, 7, 12),)
        assert limiter.finish() is None


def make_record(t, x, y, z=80, finger=True):
    return TraceRecord(t_ms=t, x=x, y=y, z=z, finger=finger)


class TestRunReplay:
    def test_empty_trace(self):
        result = run_replay([])
        assert result.state.levels == (0, 0, 0, 0, 0)
        assert result.log == []
        assert result.metrics.samples_in == 0

    def test_single_record(self):
        result = run_replay([make_record(0, 0, 6143)])
        assert result.log == [(0, LightCommand(ChannelId.RED, 22))]
        assert result.state.levels == (22, 0, 0, 0, 0)

    def test_burst_is_coalesced(self):
        # one slider, 1000 events over 1000 ms, level changing nearly every event
        trace = [make_record(t, 100, (t * 200) % 6144) for t in range(1000)]
        limited = run_replay(trace, limiter_on=True)
        free = run_replay(trace, limiter_on=False)
        assert limited.metrics.batches_out <= 41
        assert limited.state == free.state
        assert limited.metrics.commands_out < free.metrics.commands_out

    def test_limiter_off_latency_zero(self):
        trace = [make_record(t, 100, (t * 150) % 6144) for t in range(0, 400, 3)]
        result = run_replay(trace, limiter_on=False)
        assert result.metrics.max_latency_ms == 0
        assert result.metrics.mean_latency_ms == 0.0

    def test_limiter_on_latency_bounded_by_tick(self):
        trace = [make_record(t, 100, (t * 150) % 6144) for t in range(0, 400, 3)]
        result = run_replay(trace, limiter_on=True)
        assert 0 < result.metrics.max_latency_ms <= 25

    def test_log_formatting(self):
        result = run_replay([make_record(0, 0, 6143)])
        assert format_command_log(result.log) == ["0 C016D6"]

    def test_command_timestamps_non_decreasing(self):
        rng = random.Random(3)
        trace = [
            make_record(t * 4, rng.randrange(6144), rng.randrange(6144))
            for t in range(300)
        ]
        result = run_replay(trace, limiter_on=True)
        times = [t for t, _ in result.log]
        assert times == sorted(times)

    def test_batches_at_least_one_tick_apart(self):
        rng = random.Random(4)
        trace = [
            make_record(t, rng.randrange(6144), rng.randrange(6144))
            for t in range(0, 2000, 2)
        ]
        result = run_replay(trace, limiter_on=True)
        batch_times = sorted({t for t, _ in result.log})
        gaps = [b - a for a, b in zip(batch_times, batch_times[1:])]
        assert all(gap >= 25 for gap in gaps)


def trace_strategy():
    steps = st.tuples(
        st.integers(0, 40),  # time increment
        st.integers(0, 6143),
        st.integers(0, 6143),
        st.integers(0, 255),
        st.booleans(),
    )
    return st.lists(steps, max_size=60).map(_accumulate)


def _accumulate(steps):
    trace, t = [], 0
    for dt, x, y, z, finger in steps:
        t += dt
        trace.append(TraceRecord(t_ms=t, x=x, y=y, z=z, finger=finger))
    return trace


class TestCoalescingSoundness:
    @settings(max_examples=200, deadline=None)
    @given(trace_strategy())
    def test_final_state_limiter_invariant(self, trace):
        limited = run_replay(trace, limiter_on=True)
        free = run_replay(trace, limiter_on=False)
        assert limited.state == free.state

    @settings(max_examples=100, deadline=None)
    @given(trace_strategy())
    def test_per_channel_order_preserved(self, trace):
        limited = run_replay(trace, limiter_on=True)
        free = run_replay(trace, limiter_on=False)
        for channel in range(5):
            full = [c.level for _, c in free.log if c.channel == channel]
            coalesced = [c.level for _, c in limited.log if c.channel == channel]
            # coalesced levels are a subsequence of the full change sequence
            it = iter(full)
            assert all(level in it for level in coalesced)
            if full:
                assert coalesced and coalesced[-1] == full[-1]

    @settings(max_examples=100, deadline=None)
    @given(trace_strategy())
    def test_throughput_bound_over_every_window(self, trace):
        result = run_replay(trace, limiter_on=True)
        batch_times = sorted({t for t, _ in result.log})
        for i, start in enumerate(batch_times):
            for j in range(i, len(batch_times)):
                window = batch_times[j] - start
                count = j - i + 1
                assert count <= -(-window // 25) + 1


class TestRunByteStream:
    def test_clean_stream_matches_trace_replay(self):
        samples = [
            TouchSample(x=512, y=3000, z=90, finger=True),
            TouchSample(x=512, y=6143, z=90, finger=True),
            TouchSample(x=1792, y=6143, z=90, finger=True),
        ]
        stream_result = run_byte_stream(build_stream(samples))
        trace = [
            TraceRecord(t_ms=i * 25, x=s.x, y=s.y, z=s.z, finger=s.finger)
            for i, s in enumerate(samples)
        ]
        trace_result = run_replay(trace, limiter_on=False)
        assert stream_result.log == trace_result.log
        assert stream_result.state == trace_result.state
        assert stream_result.metrics.frames_bad == 0

    def test_frames_bad_counts_diagnostics(self):
        from conftest import decode_all
        from touchlight.frames import Diagnostic

        samples = [TouchSample(x=100 * i, y=50 * i, z=60, finger=True) for i in range(10)]
        data = bytearray(build_stream(samples))
        data[7] ^= 0xFF  # corrupt one payload byte
        data = bytes(data)
        expected = sum(1 for e in decode_all(data) if isinstance(e, Diagnostic))
        result = run_byte_stream(data)
        assert result.metrics.frames_bad == expected
        assert expected > 0


class TestCustomConfig:
    def test_pressure_gate_override(self):
        trace = [make_record(0, 0, 6143, z=10)]
        default = run_replay(trace)
        assert default.log == []
        sensitive = run_replay(trace, EngineConfig(z_threshold=5))
        assert len(sensitive.log) == 1

    def test_level_count_override(self):
        config = EngineConfig(layout=SliderLayout(level_count=8))
        result = run_replay([make_record(0, 0, 6143)], config)
        assert result.log == [(0, LightCommand(ChannelId.RED, 7))]


class TestMetrics:
    def test_as_dict_keys_and_rounding(self):
        trace = [make_record(t, 100, (t * 150) % 6144) for t in range(0, 400, 3)]
        metrics = run_replay(trace, limiter_on=True).metrics
        report = metrics.as_dict()
        assert set(report) == {
            "samples_in",
            "frames_bad",
            "commands_out",
            "batches_out",
            "max_latency_ms",
            "mean_latency_ms",
        }
        assert report["samples_in"] == len(trace)
        assert report["mean_latency_ms"] == round(metrics.mean_latency_ms, 3)
