"""Developer library: define options with embedded documentation once,
parse argv against them, and emit short help, long help, a man page, or
the XML spec the host consumes.
"""

from __future__ import annotations

import textwrap
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from . import model, specxml
from .errors import (
    DuplicateFlag,
    InvalidSpec,
    MissingRequired,
    MissingValue,
    UnknownFlag,
)
from .model import (
    OptionDef,
    OptionGroup,
    OptionKind,
    OptionValue,
    ProgramSpec,
    RenderStyle,
)

SHORT_WIDTH = 80
LONG_WRAP = 78


class EmitFormat(str, Enum):
    SHORT_HELP = "short"
    LONG_HELP = "long"
    MAN_PAGE = "man"
    GUILINER_XML = "xml"


@dataclass(frozen=True)
class ArgSpec:
    name: str
    version: str
    summary: str
    description: str = ""
    options: tuple[OptionDef, ...] = ()
    man_section: int = 1
    man_date: str = ""

    def to_program_spec(self) -> ProgramSpec:
        """Projection the host consumes: one group holding every option."""
        return ProgramSpec(
            name=self.name,
            executable=self.name,
            description=self.description or self.summary,
            version=self.version,
            display_title=self.name,
            groups=(OptionGroup(name="Options", doc="", options=self.options),),
        )


def check_argspec(spec: ArgSpec) -> None:
    if not 1 <= spec.man_section <= 8:
        raise InvalidSpec(f"man section must be 1..8, got {spec.man_section}")
    model.check_spec(spec.to_program_spec())


@dataclass
class ParsedArgs:
    values: dict[str, tuple[OptionValue, ...]]
    leftover: list[str] = field(default_factory=list)


def parse_argv(spec: ArgSpec, argv: list[str]) -> ParsedArgs:
    """Parse argv (program name already stripped) against the spec.

    Recognizes all four render styles; "--" ends flag parsing; required
    options are enforced; repeating a non-repeatable option is an error.
    """
    check_argspec(spec)
    by_flag: dict[str, OptionDef] = {}
    positionals: list[OptionDef] = []
    for opt in spec.options:
        if opt.style == RenderStyle.POSITIONAL:
            positionals.append(opt)
        else:
            by_flag[opt.flag] = opt

    values: dict[str, list[OptionValue]] = {}
    leftover: list[str] = []
    pos_index = 0
    flags_done = False
    i = 0

    def record(opt: OptionDef, raw: str) -> None:
        if opt.id in values and not opt.repeatable:
            raise DuplicateFlag(opt.id)
        values.setdefault(opt.id, []).append(model.validate_value(opt, raw))

    def take_positional(token: str) -> None:
        nonlocal pos_index
        while pos_index < len(positionals):
            opt = positionals[pos_index]
            if opt.id in values and not opt.repeatable:
                pos_index += 1
                continue
            record(opt, token)
            return
        leftover.append(token)

    while i < len(argv):
        token = argv[i]
        if not flags_done and token == "--":
            flags_done = True
        elif not flags_done and token.startswith("-") and token != "-":
            if "=" in token:
                flag, _, raw = token.partition("=")
                opt = by_flag.get(flag)
                if opt is not None and opt.style == RenderStyle.EQUALS:
                    record(opt, raw)
                    i += 1
                    continue
            opt = by_flag.get(token)
            if opt is None:
                raise UnknownFlag(token)
            if opt.kind == OptionKind.FLAG:
                record(opt, "true")
            elif opt.style == RenderStyle.EQUALS:
                raise MissingValue(token)
            else:
                if i + 1 >= len(argv):
                    raise MissingValue(token)
                i += 1
                record(opt, argv[i])
        else:
            take_positional(token)
        i += 1

    missing = [o.id for o in spec.options if o.required and o.id not in values]
    if missing:
        raise MissingRequired(missing)
    return ParsedArgs(
        values={k: tuple(v) for k, v in values.items()}, leftover=leftover
    )


# --- emission -------------------------------------------------------------

_PLACEHOLDERS = {
    OptionKind.STRING: "STR",
    OptionKind.INT: "INT",
    OptionKind.FLOAT: "FLOAT",
    OptionKind.INFILE: "FILE",
    OptionKind.OUTFILE: "FILE",
    OptionKind.DIR: "DIR",
}


def _placeholder(opt: OptionDef) -> str:
    if opt.kind == OptionKind.FLAG:
        return ""
    if opt.kind == OptionKind.CHOICE:
        return "{" + "|".join(v for v, _ in opt.choices) + "}"
    return _PLACEHOLDERS[opt.kind]


def _invocation(opt: OptionDef) -> str:
    ph = _placeholder(opt)
    if opt.style == RenderStyle.POSITIONAL:
        return ph or opt.id.upper()
    if opt.kind == OptionKind.FLAG:
        return opt.flag
    if opt.style == RenderStyle.EQUALS:
        return f"{opt.flag}={ph}"
    return f"{opt.flag} {ph}"


def _usage_line(spec: ArgSpec) -> str:
    parts = [f"usage: {spec.name}"]
    if any(o.style != RenderStyle.POSITIONAL for o in spec.options):
        parts.append("[options]")
    for opt in spec.options:
        if opt.style == RenderStyle.POSITIONAL:
            token = _invocation(opt)
            parts.append(token if opt.required else f"[{token}]")
    return " ".join(parts)


def emit_short_help(spec: ArgSpec) -> str:
    lines = [_usage_line(spec), "", spec.summary, "", "options:"]
    invocations = [_invocation(o) for o in spec.options]
    col = min(max((len(s) for s in invocations), default=0) + 4, 30)
    for opt, inv in zip(spec.options, invocations):
        line = f"  {inv:<{col}}{opt.label}"
        lines.append(line.rstrip()[:SHORT_WIDTH])
    return "\n".join(lines) + "\n"


def emit_long_help(spec: ArgSpec) -> str:
    lines = [emit_short_help(spec).rstrip("\n"), ""]
    if spec.description:
        lines.extend(textwrap.wrap(spec.description, LONG_WRAP))
        lines.append("")
    for opt in spec.options:
        lines.append(_invocation(opt))
        doc = opt.doc or opt.label
        for wrapped in textwrap.wrap(doc, LONG_WRAP - 4):
            lines.append("    " + wrapped)
        if opt.default is not None:
            lines.append(f"    (default: {opt.default})")
        if opt.required:
            lines.append("    (required)")
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def _roff_escape(text: str) -> str:
    text = text.replace("\\", "\\\\").replace("-", "\\-")
    if text.startswith(".") or text.startswith("'"):
        text = "\\&" + text
    return text


def emit_man_page(spec: ArgSpec) -> str:
    date = spec.man_date or "1970-01-01"
    lines = [
        f'.TH {spec.name.upper()} {spec.man_section} "{date}" "{spec.name} {spec.version}"',
        ".SH NAME",
        f"{spec.name} \\- {_roff_escape(spec.summary)}",
        ".SH SYNOPSIS",
        f".B {spec.name}",
    ]
    for opt in spec.options:
        token = _roff_escape(_invocation(opt))
        lines.append(f"[{token}]" if not opt.required else token)
    lines.append(".SH DESCRIPTION")
    lines.append(_roff_escape(spec.description or spec.summary))
    lines.append(".SH OPTIONS")
    for opt in spec.options:
        lines.append(".TP")
        lines.append(f".B {_roff_escape(_invocation(opt))}")
        lines.append(_roff_escape(opt.doc or opt.label))
    return "\n".join(lines) + "\n"


def emit_guiliner_xml(spec: ArgSpec) -> bytes:
    doc = specxml.SpecDocument(spec=spec.to_program_spec())
    return specxml.serialize_spec(doc)


def emit(spec: ArgSpec, fmt: EmitFormat) -> bytes:
    check_argspec(spec)
    if fmt == EmitFormat.SHORT_HELP:
        return emit_short_help(spec).encode("utf-8")
    if fmt == EmitFormat.LONG_HELP:
        return emit_long_help(spec).encode("utf-8")
    if fmt == EmitFormat.MAN_PAGE:
        return emit_man_page(spec).encode("utf-8")
    if fmt == EmitFormat.GUILINER_XML:
        return emit_guiliner_xml(spec)
    raise ValueError(f"unknown emit format: {fmt}")
