"""Operator command line: record | train | eval | play | saliency | serve.

Exit codes: 0 success, 1 invalid configuration or missing inputs, 2 I/O or
port failures, 3 non-finite training loss.
"""

import argparse
import json
import sys
from pathlib import Path

from .config import load_config, parse_cli_overrides
from .errors import ArgumentError, FormatError, NonFiniteLossError
from . import pipeline


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pxplay",
        description="Record a scripted duel arena, train frame-stack CNNs on the "
                    "pixels, and play the trained agent live.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="flat JSON config file")
        p.add_argument("--seed", type=int, help="master seed override")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       dest="overrides", help="override any config key")

    p = sub.add_parser("record", help="record demonstration episodes")
    common(p)
    p.add_argument("--out", help="dataset directory (default: config data_dir)")

    p = sub.add_parser("train", help="train a model on a recorded dataset")
    common(p)
    p.add_argument("--data", help="dataset directory")
    p.add_argument("--out", help="run output directory")

    p = sub.add_parser("eval", help="validation metrics, confusion, bias tuning")
    common(p)
    p.add_argument("--data", help="dataset directory")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", help="report directory")

    p = sub.add_parser("play", help="live match series vs a CPU level")
    common(p)
    p.add_argument("--data", help="dataset directory")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out", help="series output directory")

    p = sub.add_parser("saliency", help="saliency maps over an episode segment")
    common(p)
    p.add_argument("--data", help="dataset directory")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--episode", help="episode file (default: first val episode)")
    p.add_argument("--tick", type=int, default=20)
    p.add_argument("--count", type=int, default=8)
    p.add_argument("--out", help="output directory")

    p = sub.add_parser("serve", help="websocket gateway + web UI")
    common(p)
    p.add_argument("--data", help="dataset directory (needed with --checkpoint)")
    p.add_argument("--checkpoint", help="model to drive agent mode")
    p.add_argument("--port", type=int, help="listen port override")
    p.add_argument("--host", default="127.0.0.1")

    return parser


def _config_from(args):
    overrides = parse_cli_overrides(args.overrides)
    if args.seed is not None:
        overrides["seed"] = args.seed
    if getattr(args, "port", None) is not None:
        overrides["port"] = args.port
    return load_config(args.config, overrides)


def _require_file(path, what: str):
    if path is None or not Path(path).exists():
        raise ArgumentError(f"{what} not found: {path}")
    return path


def run_command(args) -> int:
    config = _config_from(args)
    if args.command == "record":
        manifest = pipeline.cmd_record(config, out_dir=args.out)
        print(f"dataset written: {manifest}")
    elif args.command == "train":
        def progress(rec):
            if "val_top1" in rec:
                print(f"iter {rec['iteration']}: loss {rec['loss']:.4f} "
                      f"val top1 {rec['val_top1']:.3f} top3 {rec['val_top3']:.3f}")

        summary = pipeline.cmd_train(config, data_dir=args.data, out_dir=args.out,
                                     progress=progress)
        print(json.dumps(summary, indent=2, sort_keys=True))
    elif args.command == "eval":
        _require_file(args.checkpoint, "checkpoint")
        metrics = pipeline.cmd_eval(config, data_dir=args.data,
                                    checkpoint=args.checkpoint, out_dir=args.out)
        print(json.dumps(metrics, indent=2, sort_keys=True))
    elif args.command == "play":
        _require_file(args.checkpoint, "checkpoint")
        doc = pipeline.cmd_play(config, data_dir=args.data,
                                checkpoint=args.checkpoint, out_dir=args.out)
        print(f"P1 damage {doc['p1_mean']:.1f} ± {doc['p1_halfwidth']:.1f}  "
              f"CPU damage {doc['p2_mean']:.1f} ± {doc['p2_halfwidth']:.1f} "
              f"over {doc['games']} games")
    elif args.command == "saliency":
        _require_file(args.checkpoint, "checkpoint")
        doc = pipeline.cmd_saliency(config, data_dir=args.data,
                                    checkpoint=args.checkpoint,
                                    episode=args.episode, start_tick=args.tick,
                                    count=args.count, out_dir=args.out)
        print(f"wrote {len(doc.get('saliency_files', []))} saliency frames")
    elif args.command == "serve":
        import socket

        import uvicorn

        from .service import create_app

        if args.checkpoint is not None:
            _require_file(args.checkpoint, "checkpoint")
        with socket.socket() as probe:  # surface a busy port as exit 2, not
            probe.bind((args.host, config.port))  # uvicorn's own exit code
        app = create_app(config, checkpoint=args.checkpoint, data_dir=args.data)
        try:
            uvicorn.run(app, host=args.host, port=config.port, log_level="warning")
        except SystemExit as exc:  # uvicorn startup failures
            if exc.code:
                raise OSError(f"server failed to start (uvicorn exit {exc.code})")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run_command(args)
    except NonFiniteLossError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ArgumentError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
