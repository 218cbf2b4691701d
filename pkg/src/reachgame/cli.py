"""Command line entry points.

Subcommands: replay, simulate, serve, report, store list, store delete.
Exit codes: 0 success, 1 usage, 2 malformed input, 3 store failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys

from . import store
from .capture import (
    MalformedRecord,
    NoiseModel,
    generate,
    open_replay,
    write_frames,
)
from .config import ConfigError, GameConfigs, load_config_file
from .engine import GameState, event_to_record, run_stream
from .metrics import render_report, report_records
from .model import FrameValidationError
from .scripts import PLAYERS, load_script_file
from .service import DEFAULT_BIND

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MALFORMED = 2
EXIT_STORE = 3


class CliFailure(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; this tool reserves 2 for bad input data.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="reachgame",
        description="Reach-and-place game sessions: simulate, replay, report, serve.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add_common(p, with_store=True):
        p.add_argument("--config", metavar="FILE", help="JSON config overrides")
        if with_store:
            p.add_argument(
                "--store", default="sessions", metavar="DIR",
                help="session store directory (default: sessions)",
            )

    def add_outputs(p):
        p.add_argument("--no-store", action="store_true", help="do not save the session")
        p.add_argument("--events", metavar="FILE", help="write the event log here")
        p.add_argument("--report", metavar="FILE", help="write the text report here")
        p.add_argument(
            "--report-jsonl", metavar="FILE", help="write the machine-readable report here"
        )
        p.add_argument(
            "--quiet", action="store_true", help="do not print the report to stdout"
        )

    p = sub.add_parser("replay", help="run the engine over a recorded frame file")
    p.add_argument("input", help="frame file to replay")
    add_common(p)
    add_outputs(p)

    p = sub.add_parser("simulate", help="generate a synthetic session and score it")
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--player", choices=sorted(PLAYERS), help="built-in player (default: perfect)"
    )
    group.add_argument("--script", metavar="FILE", help="movement script file")
    p.add_argument("--reps", type=int, default=30, help="repetitions for --player (default: 30)")
    p.add_argument("--seed", type=int, default=0, help="noise RNG seed (default: 0)")
    p.add_argument("--fps", type=float, default=30.0, help="frame rate (default: 30)")
    p.add_argument(
        "--noise", metavar="SPEC",
        help="off | default | NEAR,FAR sigmas in meters "
        "(default: off for --player, default for --script)",
    )
    p.add_argument("--frames-out", metavar="FILE", help="write the generated frames here")
    add_common(p)
    add_outputs(p)

    p = sub.add_parser("serve", help="run the realtime session server")
    p.add_argument(
        "--bind", default=DEFAULT_BIND, metavar="HOST:PORT",
        help=f"listen address (default: {DEFAULT_BIND})",
    )
    p.add_argument("--frontend", metavar="DIR", help="serve this static directory at /")
    add_common(p)

    p = sub.add_parser("report", help="print the metrics report for a stored session")
    p.add_argument("session_id", nargs="?", help="stored session id")
    p.add_argument("--file", metavar="FILE", help="read a session file directly")
    add_common(p)

    p = sub.add_parser("store", help="manage stored sessions")
    store_sub = p.add_subparsers(dest="store_command", required=True, metavar="ACTION")
    sp = store_sub.add_parser("list", help="list stored sessions")
    add_common(sp)
    sp = store_sub.add_parser("delete", help="delete a stored session")
    sp.add_argument("session_id")
    add_common(sp)

    return parser


def _load_configs(args) -> GameConfigs:
    if not getattr(args, "config", None):
        return GameConfigs()
    try:
        return load_config_file(args.config)
    except OSError as e:
        raise CliFailure(EXIT_MALFORMED, f"cannot read config: {e}") from None
    except ConfigError as e:
        raise CliFailure(EXIT_MALFORMED, f"{args.config}: {e}") from None


def _write_lines(path, objs) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for obj in objs:
            f.write(json.dumps(obj, separators=(",", ":")))
            f.write("\n")


def _run_and_emit(args, cfgs: GameConfigs, frames, source_name: str) -> int:
    state = GameState.new(cfgs.scene, cfgs.dda)
    try:
        state, events = run_stream(state, cfgs.scene, cfgs.gesture, cfgs.dda, frames)
    except (MalformedRecord, FrameValidationError) as e:
        raise CliFailure(EXIT_MALFORMED, f"{source_name}: {e}") from None
    if not args.no_store:
        record = store.new_record(cfgs.scene, cfgs.dda, cfgs.gesture, state.drops, events)
        try:
            session_id = store.save(args.store, record)
        except store.StoreError as e:
            raise CliFailure(EXIT_STORE, f"store: {e}") from None
        print(f"saved session {session_id}")
    if args.events:
        _write_lines(args.events, (event_to_record(e) for e in events))
    drops = list(state.drops)
    if args.report_jsonl:
        _write_lines(args.report_jsonl, report_records(drops, state.target_center))
    text = render_report(drops, state.target_center)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as f:
            f.write(text)
    if not args.quiet:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_replay(args) -> int:
    cfgs = _load_configs(args)
    try:
        frames = open_replay(args.input)
    except OSError as e:
        raise CliFailure(EXIT_MALFORMED, f"cannot read {args.input}: {e}") from None
    return _run_and_emit(args, cfgs, frames, args.input)


def _parse_noise(spec: str | None, configured: NoiseModel, scripted: bool) -> NoiseModel:
    if spec is None:
        # Built-in players are calibration runs; scripts get the sensor model.
        return configured if scripted else NoiseModel.off()
    if spec == "off":
        return NoiseModel.off()
    if spec == "default":
        return configured
    try:
        near, _, far = spec.partition(",")
        return NoiseModel(float(near), float(far))
    except ValueError:
        raise CliFailure(
            EXIT_MALFORMED, f"bad --noise {spec!r}: want off, default, or NEAR,FAR"
        ) from None


def _cmd_simulate(args) -> int:
    cfgs = _load_configs(args)
    if args.reps <= 0:
        raise CliFailure(EXIT_USAGE, "--reps must be positive")
    if args.fps <= 0:
        raise CliFailure(EXIT_USAGE, "--fps must be positive")
    if args.script:
        try:
            script = load_script_file(args.script)
        except OSError as e:
            raise CliFailure(EXIT_MALFORMED, f"cannot read {args.script}: {e}") from None
        except ValueError as e:
            raise CliFailure(EXIT_MALFORMED, f"{args.script}: {e}") from None
    else:
        player = args.player or "perfect"
        script = PLAYERS[player](cfgs.scene, reps=args.reps)
    noise = _parse_noise(args.noise, cfgs.noise, scripted=bool(args.script))
    frames = list(generate(script, noise, args.seed, args.fps))
    if args.frames_out:
        write_frames(args.frames_out, frames)
    return _run_and_emit(args, cfgs, frames, "generated frames")


def _cmd_serve(args) -> int:
    from .service import serve  # deferred: pulls in the web stack

    cfgs = _load_configs(args)
    serve(args.bind, store_root=args.store, defaults=cfgs, frontend_dir=args.frontend)
    return EXIT_OK


def _created_stamp(created_at_us: int) -> str:
    dt = datetime.datetime.fromtimestamp(
        created_at_us / 1e6, tz=datetime.timezone.utc
    )
    return dt.strftime("%Y-%m-%d %H:%M:%S")


def _cmd_report(args) -> int:
    if bool(args.session_id) == bool(args.file):
        raise CliFailure(EXIT_USAGE, "need a session id or --file, not both")
    try:
        if args.file:
            record = store.load_file(args.file)
        else:
            record = store.load(args.store, args.session_id)
    except store.NotFound as e:
        raise CliFailure(EXIT_STORE, f"no such session: {e}") from None
    except store.StoreError as e:
        raise CliFailure(EXIT_STORE, str(e)) from None
    print(f"session {record.session_id}")
    print(f"created {_created_stamp(record.created_at_us)} UTC")
    sys.stdout.write(render_report(list(record.drops), record.scene.target_center))
    return EXIT_OK


def _cmd_store(args) -> int:
    if args.store_command == "list":
        for s in store.list_sessions(args.store):
            rate = "-" if s.hit_rate is None else f"{round(s.hit_rate * 100)}%"
            print(
                f"{s.session_id}  {_created_stamp(s.created_at_us)}"
                f"  drops={s.n_drops}  hits={rate}"
            )
        return EXIT_OK
    try:
        store.delete(args.store, args.session_id)
    except store.NotFound as e:
        raise CliFailure(EXIT_STORE, f"no such session: {e}") from None
    except store.StoreError as e:
        raise CliFailure(EXIT_STORE, str(e)) from None
    print(f"deleted session {args.session_id}")
    return EXIT_OK


_COMMANDS = {
    "replay": _cmd_replay,
    "simulate": _cmd_simulate,
    "serve": _cmd_serve,
    "report": _cmd_report,
    "store": _cmd_store,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CliFailure as e:
        print(f"reachgame: {e}", file=sys.stderr)
        return e.code


if __name__ == "__main__":
    sys.exit(main())
