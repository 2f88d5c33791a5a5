"""Command line entry point: decode, map, replay, serve.

Exit codes: 0 success, 1 usage or I/O error, 2 success but empty result.
Output is JSON lines (decode) or plain text lines (map, replay) so every
layer can be scripted and piped; diagnostics and metrics go to stderr.
"""

from __future__ import annotations

import argparse
import asyncio
import itertools
import json
import sys

from .errors import RangeError, TraceFormatError
from .frames import Diagnostic, StreamDecoder
from .lights import ChannelId, LEVEL_MAX
from .pipeline import TICK_PERIOD_MS, format_command_log, read_trace, run_replay
from .server import LightServer
from .sliders import EngineConfig, SliderLayout, locate_slider, quantize_level

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("engine overrides")
    group.add_argument("--band-width", type=int, default=1024, metavar="N",
                       help="slider band width in pad units (default 1024)")
    group.add_argument("--gap-width", type=int, default=256, metavar="N",
                       help="gap width between bands (default 256)")
    group.add_argument("--levels", type=int, default=23, metavar="N",
                       help="intensity level count, 1..%d (default 23)" % (LEVEL_MAX + 1))
    group.add_argument("--z-threshold", type=int, default=30, metavar="N",
                       help="minimum pressure for a touch to count (default 30)")
    group.add_argument("--y-inverted", action="store_true",
                       help="treat y=0 as the top of the pad")

    parser = argparse.ArgumentParser(
        prog="touchlight",
        description="Touchpad-style virtual sliders driving a 5-channel RGBYW light cluster.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decode", parents=[common],
                       help="decode raw 6-byte frames into JSON sample lines")
    p.add_argument("input", nargs="?", default="-",
                   help="binary frame file, or '-' for stdin (default)")

    p = sub.add_parser("map", parents=[common],
                       help="map one (x, y) coordinate to its slider and level")
    p.add_argument("x", type=int)
    p.add_argument("y", type=int)

    p = sub.add_parser("replay", parents=[common],
                       help="replay a trace file into a command log")
    p.add_argument("trace", help="trace file (JSON lines)")
    p.add_argument("--limiter", choices=["on", "off"], default="on",
                   help="rate-limit commands to one batch per %d ms (default on)" % TICK_PERIOD_MS)
    p.add_argument("--metrics", action="store_true",
                   help="print metrics JSON to stderr after the log")

    p = sub.add_parser("serve", parents=[common],
                       help="run the WebSocket control service")
    p.add_argument("--bind", default="127.0.0.1:8765", metavar="HOST:PORT",
                   help="listen address (default 127.0.0.1:8765)")

    return parser


def build_config(args: argparse.Namespace) -> EngineConfig:
    # light commands carry at most 23 wire levels, so --levels is capped there
    if not 1 <= args.levels <= LEVEL_MAX + 1:
        raise ValueError(f"--levels must be in 1..{LEVEL_MAX + 1}")
    layout = SliderLayout(
        band_width=args.band_width,
        gap_width=args.gap_width,
        level_count=args.levels,
        y_inverted=args.y_inverted,
    )
    return EngineConfig(z_threshold=args.z_threshold, layout=layout)


def cmd_decode(args: argparse.Namespace, config: EngineConfig) -> int:
    try:
        if args.input == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(args.input, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        print(f"touchlight: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    # deterministic timestamps: one frame per nominal 25 ms device tick
    ticks = itertools.count()
    decoder = StreamDecoder(clock=lambda: next(ticks) * TICK_PERIOD_MS)
    decoded = 0
    for event in decoder.feed(data):
        if isinstance(event, Diagnostic):
            print(f"byte {event.offset}: {event.reason}", file=sys.stderr)
            continue
        decoded += 1
        print(json.dumps({"t_ms": event.t_ms, "x": event.x, "y": event.y,
                          "z": event.z, "finger": event.finger}))
    return EXIT_OK if decoded else EXIT_EMPTY


def cmd_map(args: argparse.Namespace, config: EngineConfig) -> int:
    try:
        band = locate_slider(args.x, config.layout)
        level = quantize_level(args.y, config.layout)
    except RangeError as exc:
        print(f"touchlight: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if band is None:
        print("gap")
    else:
        channel = ChannelId(band).name.lower()
        print(f"slider={band} channel={channel} level={level}")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace, config: EngineConfig) -> int:
    try:
        with open(args.trace, "r", encoding="utf-8") as fh:
            trace = read_trace(fh)
    except OSError as exc:
        print(f"touchlight: cannot read {args.trace}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except TraceFormatError as exc:
        print(f"touchlight: {args.trace}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    result = run_replay(trace, config, limiter_on=args.limiter == "on")
    for line in format_command_log(result.log):
        print(line)
    if args.metrics:
        print(json.dumps(result.metrics.as_dict()), file=sys.stderr)
    return EXIT_OK if result.log else EXIT_EMPTY


def cmd_serve(args: argparse.Namespace, config: EngineConfig) -> int:
    host, _, port_text = args.bind.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        print(f"touchlight: bad --bind {args.bind!r}, expected HOST:PORT", file=sys.stderr)
        return EXIT_ERROR
    server = LightServer(config)
    try:
        asyncio.run(server.run(
            host or "127.0.0.1", port,
            on_listening=lambda h, p: print(f"listening on ws://{h}:{p}", flush=True),
        ))
    except OSError as exc:
        print(f"touchlight: cannot bind {args.bind}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except KeyboardInterrupt:
        pass
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except ValueError as exc:
        print(f"touchlight: {exc}", file=sys.stderr)
        return EXIT_ERROR
    handler = {
        "decode": cmd_decode,
        "map": cmd_map,
        "replay": cmd_replay,
        "serve": cmd_serve,
    }[args.command]
    return handler(args, config)


if __name__ == "__main__":
    sys.exit(main())
