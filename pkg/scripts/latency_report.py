#!/usr/bin/env python3
"""Replay a dense synthetic trace and compare limiter-on vs limiter-off runs.

Shows the coalescing effect: a 1000-event burst collapses to at most
ceil(1000/25)+1 batches while the final light state stays identical, and
deferred commands never wait longer than one tick.
"""

import argparse
import json
import random

from touchlight.pipeline import TraceRecord, run_replay


def dense_trace(events: int, span_ms: int, seed: int) -> list[TraceRecord]:
    rng = random.Random(seed)
    records = []
    for i in range(events):
        t = i * span_ms // events
        records.append(
            TraceRecord(
                t_ms=t,
                x=rng.randrange(0, 6144),
                y=rng.randrange(0, 6144),
                z=rng.randrange(30, 256),
                finger=True,
            )
        )
    return records


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--events", type=int, default=1000)
    parser.add_argument("--span-ms", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    trace = dense_trace(args.events, args.span_ms, args.seed)
    for limiter_on in (False, True):
        result = run_replay(trace, limiter_on=limiter_on)
        label = "limiter on " if limiter_on else "limiter off"
        print(f"{label}: {json.dumps(result.metrics.as_dict())}")
        print(f"{label}: final levels {list(result.state.levels)}")


if __name__ == "__main__":
    main()
