"""Headless front end: every behavior of the host is reachable without
the web UI.

Exit codes: 2 for usage errors, 1 for validation or run-setup failures,
and for `run` the child's own exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import argdoc, model, runner, specxml
from .assemble import preview_text
from .errors import CliHostError, MissingRequired
from .fixtures import FIXTURE_ARGSPECS


def _load_document(path: str) -> specxml.SpecDocument:
    with open(path, "rb") as fh:
        return specxml.parse_spec(fh.read())


def _apply_sets(session, bindings: list[str]):
    for binding in bindings:
        if "=" not in binding:
            raise CliHostError(f"--set expects id=value, got {binding!r}")
        oid, _, raw = binding.partition("=")
        session = model.set_option(session, oid, raw)
    return session


def _cmd_validate(args) -> int:
    with open(args.spec, "rb") as fh:
        report = specxml.validate_document(fh.read())
    if args.json:
        print(json.dumps({
            "errors": [{"path": p, "message": m} for p, m in report.errors],
            "warnings": [{"path": p, "message": m} for p, m in report.warnings],
        }))
    else:
        for path, message in report.errors:
            print(f"error: {path}: {message}", file=sys.stderr)
        for path, message in report.warnings:
            print(f"warning: {path}: {message}", file=sys.stderr)
        if report.ok:
            print("OK")
    return 0 if report.ok else 1


def _cmd_preview(args) -> int:
    doc = _load_document(args.spec)
    session = specxml.session_from_document(doc, args.cwd or ".")
    session = _apply_sets(session, args.set or [])
    text = preview_text(session)
    if args.json:
        print(json.dumps({"text": text, "missing": model.unmet_required(session)}))
    else:
        print(text)
    return 0


def _cmd_run(args) -> int:
    import os

    doc = _load_document(args.spec)
    cwd = args.cwd or os.getcwd()
    session = specxml.session_from_document(doc, cwd)
    session = _apply_sets(session, args.set or [])
    missing = model.unmet_required(session)
    if missing:
        print("missing required options: " + ", ".join(missing), file=sys.stderr)
        return 1
    from .assemble import assemble

    command = assemble(session)

    def sink(chunk: runner.OutputChunk) -> None:
        target = sys.stdout.buffer if chunk.stream == runner.STDOUT else sys.stderr.buffer
        target.write(chunk.data)
        target.flush()

    record = runner.start_run(command, sink=sink, session=session)
    runner.await_run(record)
    if record.status == runner.EXITED:
        return record.exit_code or 0
    print(f"run {record.status}: {record.fail_reason or ''}", file=sys.stderr)
    return 1


def _cmd_export(args) -> int:
    doc = _load_document(args.spec)
    session = specxml.session_from_document(doc, args.cwd or ".")
    session = _apply_sets(session, args.set or [])
    data = specxml.serialize_spec(specxml.attach_values(doc, session))
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
    return 0


def _cmd_emit(args) -> int:
    builder = FIXTURE_ARGSPECS.get(args.fixture)
    if builder is None:
        known = ", ".join(sorted(FIXTURE_ARGSPECS))
        print(f"unknown fixture {args.fixture!r}; known: {known}", file=sys.stderr)
        return 1
    data = argdoc.emit(builder(), argdoc.EmitFormat(args.format))
    sys.stdout.buffer.write(data)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    try:
        serve(args.spec, port=args.port, cwd=args.cwd, frontend_dir=args.frontend)
    except CliHostError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clihost",
        description="Host command line programs described by an XML option spec.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a spec file, report every problem")
    p.add_argument("spec")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("preview", help="print the assembled command line")
    p.add_argument("spec")
    p.add_argument("--set", action="append", metavar="ID=VALUE")
    p.add_argument("--cwd")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_preview)

    p = sub.add_parser("run", help="execute the hosted program")
    p.add_argument("spec")
    p.add_argument("--set", action="append", metavar="ID=VALUE")
    p.add_argument("--cwd")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("export", help="write the spec with current values embedded")
    p.add_argument("spec")
    p.add_argument("--set", action="append", metavar="ID=VALUE")
    p.add_argument("--cwd")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_export)

    p = sub.add_parser("emit", help="emit docs for a fixture program spec")
    p.add_argument("fixture")
    p.add_argument("--format", choices=[f.value for f in argdoc.EmitFormat],
                   default="short")
    p.set_defaults(func=_cmd_emit)

    p = sub.add_parser("serve", help="start the local HTTP service")
    p.add_argument("spec")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--cwd")
    p.add_argument("--frontend")
    p.set_defaults(func=_cmd_serve)

    return parser


def run_cli(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except MissingRequired as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except CliHostError as exc:
        print(str(exc), file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
