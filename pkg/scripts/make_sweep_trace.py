#!/usr/bin/env python3
"""Regenerate the bundled horizontal-sweep trace and its golden command log.

The trace drags a finger at full intensity (top edge) across all 5 band
centers, crossing every gap on the way, then lifts. The golden log is the
limiter-off replay of that trace, which the limiter-on run must match
batch-for-batch because the samples arrive one tick apart.
"""

from pathlib import Path

from touchlight.pipeline import TraceRecord, format_command_log, format_trace_record, run_replay

OUT_DIR = Path(__file__).resolve().parent.parent / "traces"


def build_sweep() -> list[TraceRecord]:
    records = []
    t = 0
    # band centers and the gap centers between them, left to right
    for i in range(5):
        records.append(TraceRecord(t_ms=t, x=1280 * i + 512, y=6143, z=80, finger=True))
        if i < 4:
            records.append(TraceRecord(t_ms=t + 12, x=1280 * i + 1152, y=6143, z=80, finger=True))
        t += 25
    records.append(TraceRecord(t_ms=t - 13, x=5632, y=6143, z=80, finger=False))
    return records


def main() -> None:
    OUT_DIR.mkdir(exist_ok=True)
    records = build_sweep()

    trace_path = OUT_DIR / "sweep.jsonl"
    lines = ["# horizontal sweep at full intensity across all 5 bands"]
    lines += [format_trace_record(r) for r in records]
    trace_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    result = run_replay(records, limiter_on=False)
    golden_path = OUT_DIR / "sweep.golden"
    golden_path.write_text("\n".join(format_command_log(result.log)) + "\n", encoding="utf-8")

    print(f"wrote {trace_path} ({len(records)} records)")
    print(f"wrote {golden_path} ({len(result.log)} commands)")
    print(f"final levels: {list(result.state.levels)}")


if __name__ == "__main__":
    main()
