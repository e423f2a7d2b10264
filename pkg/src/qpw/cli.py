"""Command-line front end: thin argument parsing over the shared handlers.

Every subcommand reads JSON documents from files, delegates to the same
handler functions the HTTP service uses, and prints the handler's document
through the canonical serializer — so a CLI run and an HTTP call on the
same input produce byte-identical JSON.  Exit codes: 0 success, 1 domain
error (diagnostic on stderr), 2 usage error (argparse's own convention).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

from .errors import QPWError
from .serialize import canonical_dumps
from .service import (
    DEFAULT_PORT,
    STATE_DIR_ENV,
    handle_classify,
    handle_einv,
    handle_jacobian,
    handle_mutate,
    handle_qp_mutate,
    handle_stable,
    handle_witness,
)

__all__ = ["main", "build_parser"]


def _load(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise QPWError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise QPWError(f"{path} is not valid JSON: {exc}") from exc


def _emit(doc: Any, out_path: str | None) -> None:
    text = canonical_dumps(doc)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpw",
        description="Workbench for quivers with potential: mutation, Jacobian "
        "truncation, stability, pairing invariants, witness certificates.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mutate", help="exchange-matrix mutation of a quiver document")
    p.add_argument("quiver", help="path to a quiver JSON file")
    p.add_argument("-k", type=int, required=True, help="vertex to mutate (1-based)")
    p.add_argument("-o", "--out", help="also write the result to this file")

    p = sub.add_parser("classify", help="mutation type of a quiver document")
    p.add_argument("quiver", help="path to a quiver JSON file")
    p.add_argument("-o", "--out")

    p = sub.add_parser("qp-mutate", help="mutate a quiver with potential and reduce")
    p.add_argument("qp", help="path to a QP JSON file")
    p.add_argument("-k", type=int, required=True, help="vertex to mutate (1-based)")
    p.add_argument("-o", "--out")

    p = sub.add_parser("jacobian", help="graded dimensions of the truncated quotient")
    p.add_argument("qp", help="path to a QP JSON file")
    p.add_argument("--trunc", type=int, default=None, help="truncation degree override")
    p.add_argument("-o", "--out")

    p = sub.add_parser("stable", help="stability/brick report for a representation")
    p.add_argument("rep", help="path to a representation JSON file")
    p.add_argument("qp", help="path to a QP JSON file")
    p.add_argument("--theta", required=True, help="stability vector, e.g. 1,-1")
    p.add_argument("-o", "--out")

    p = sub.add_parser("einv", help="sampled pairing minima for a presentation class")
    p.add_argument("qp", help="path to a QP JSON file")
    p.add_argument("--g", required=True, help="presentation class, e.g. 1,-1")
    p.add_argument("--samples", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--out")

    p = sub.add_parser("witness", help="run the stable-family witness pipeline")
    p.add_argument("qp", help="path to a QP JSON file")
    p.add_argument("-k", type=int, default=5, help="instances to emit (default 5)")
    p.add_argument("--trunc", type=int, default=None, help="algebra truncation degree")
    p.add_argument("--progress", action="store_true", help="stream stage lines to stderr")
    p.add_argument("-o", "--out", help="also write the certificate to this file")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=DEFAULT_PORT)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--state-dir",
        default=None,
        help=f"session persistence directory (default: ${STATE_DIR_ENV})",
    )

    return parser


def _dispatch(args: argparse.Namespace) -> Any:
    if args.command == "mutate":
        return handle_mutate(_load(args.quiver), args.k)
    if args.command == "classify":
        return handle_classify(_load(args.quiver))
    if args.command == "qp-mutate":
        return handle_qp_mutate(_load(args.qp), args.k)
    if args.command == "jacobian":
        return handle_jacobian(_load(args.qp), args.trunc)
    if args.command == "stable":
        return handle_stable(_load(args.rep), _load(args.qp), args.theta)
    if args.command == "einv":
        return handle_einv(_load(args.qp), args.g, samples=args.samples, seed=args.seed)
    if args.command == "witness":
        options: dict[str, Any] = {"k": args.k}
        if args.trunc is not None:
            options["truncation"] = args.trunc
        progress = None
        if args.progress:
            progress = lambda line: print(line, file=sys.stderr)  # noqa: E731
        return handle_witness(_load(args.qp), options, progress=progress)
    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        app = create_app(args.state_dir)
        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        doc = _dispatch(args)
    except QPWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(doc, getattr(args, "out", None))
    return 0


if __name__ == "__main__":
    sys.exit(main())
