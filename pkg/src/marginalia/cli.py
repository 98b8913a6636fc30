"""Operator entry points: serve a session, validate bundles, replay traces,
export notes.

Exit codes are a stable contract: 0 success, 2 validation failure, 64 usage
error. ``MARGINALIA_LOG`` sets log verbosity (debug/info/warning/error).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from .engine import EngineConfig
from .export import write_exports
from .ingest import BundleInvalid, load_bundle
from .trace import TraceMalformed, read_trace, replay

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _setup_logging() -> None:
    name = os.environ.get("MARGINALIA_LOG", "warning").upper()
    level = getattr(logging, name, None)
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="marginalia", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the relay server for a lecture bundle")
    serve.add_argument("--bundle", required=True, help="lecture bundle directory")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--speed", type=float, default=1.0, help="clock speed multiplier")
    serve.add_argument("--autostart", action="store_true", help="start the clock immediately")
    serve.add_argument("--record", metavar="FILE", help="record every engine input to FILE")
    serve.add_argument("--ui", metavar="DIR", help="serve a static web UI from DIR")
    serve.add_argument("--tick-hz", type=float, default=30.0, help="clock tick rate")

    rep = sub.add_parser("replay", help="feed a recorded trace through a headless engine")
    rep.add_argument("--bundle", required=True)
    rep.add_argument("--trace", required=True)
    rep.add_argument("--expect", metavar="DIGEST", help="fail unless the final digest matches")

    val = sub.add_parser("validate", help="validate a lecture bundle directory")
    val.add_argument("bundle")

    exp = sub.add_parser("export", help="replay a trace and export the note document")
    exp.add_argument("--trace", required=True)
    exp.add_argument("--bundle", required=True)
    exp.add_argument("--out", required=True)
    exp.add_argument("--format", required=True, choices=("svg", "structured"))

    return parser


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import RelayServer, create_app

    try:
        bundle = load_bundle(args.bundle)
    except BundleInvalid as exc:
        _print_bundle_error(exc)
        return EXIT_VALIDATION
    server = RelayServer(
        bundle,
        EngineConfig(),
        speed=args.speed,
        autostart=args.autostart,
        record_path=args.record,
        tick_hz=args.tick_hz,
    )
    app = create_app(server, ui_dir=args.ui)
    print(f"serving {bundle.title!r} on ws://{args.host}:{args.port}/ws (speed {args.speed}x)")
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        print(f"cannot bind {args.host}:{args.port}: {exc}", file=sys.stderr)
        return 1
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    try:
        bundle = load_bundle(args.bundle)
    except BundleInvalid as exc:
        _print_bundle_error(exc)
        return EXIT_VALIDATION
    try:
        events = list(read_trace(args.trace))
    except TraceMalformed as exc:
        print(f"trace malformed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    _, report = replay(bundle, events)
    print(f"events_processed: {report.events_processed}")
    print(f"effects_count:    {report.effects_count}")
    print(f"wall_time_ms:     {report.wall_time_ms:.1f}")
    print(f"final_digest:     {report.final_digest}")
    if args.expect and report.final_digest != args.expect:
        print(f"digest mismatch: expected {args.expect}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        load_bundle(args.bundle)
    except BundleInvalid as exc:
        _print_bundle_error(exc)
        return EXIT_VALIDATION
    print("ok")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    try:
        bundle = load_bundle(args.bundle)
    except BundleInvalid as exc:
        _print_bundle_error(exc)
        return EXIT_VALIDATION
    try:
        events = list(read_trace(args.trace))
    except (TraceMalformed, OSError) as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    session, _ = replay(bundle, events)
    out = write_exports(session.document, args.out, args.format, bundle)
    print(f"wrote {out}")
    return EXIT_OK


def _print_bundle_error(exc: BundleInvalid) -> None:
    if exc.findings:
        for finding in exc.findings:
            print(str(finding), file=sys.stderr)
    else:
        print(f"bundle invalid: {exc.reason}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "serve": cmd_serve,
        "replay": cmd_replay,
        "validate": cmd_validate,
        "export": cmd_export,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
