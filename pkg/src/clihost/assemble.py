"""Deterministic argv assembly and shell-quoted preview rendering.

Assembly order is document order, never the order values were set;
positionals go after all flagged options. The preview string is for
display only and must tokenize back to the exact argv.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MissingRequired
from .model import (
    OptionKind,
    RenderStyle,
    SessionState,
    render_raw,
    unmet_required,
)

_SAFE_TOKEN = re.compile(r"[A-Za-z0-9_./=-]+\Z")  # \Z: "$" would allow a trailing newline

MISSING_MARKER = "MISSING REQUIRED:"


@dataclass(frozen=True)
class AssembledCommand:
    argv: tuple[str, ...]
    preview: str
    cwd: str


def shell_quote(token: str) -> str:
    """POSIX-sh-safe quoting: safe tokens pass through, everything else is
    single-quoted with embedded single quotes spelled '\\''."""
    if _SAFE_TOKEN.match(token):
        return token
    return "'" + token.replace("'", "'\\''") + "'"


def _option_argv(session: SessionState) -> list[str]:
    """Renderings for every set option: flagged in document order, then
    positionals in document order; repeatable values keep set order."""
    flagged: list[str] = []
    positional: list[str] = []
    for opt in session.spec.option_defs():
        state = session.states[opt.id]
        if not state.is_set:
            continue
        for value in state.values:
            if opt.kind == OptionKind.FLAG:
                if value.value:
                    flagged.append(opt.flag)
                continue
            raw = render_raw(value)
            if opt.style == RenderStyle.SEPARATE:
                flagged.extend([opt.flag, raw])
            elif opt.style == RenderStyle.EQUALS:
                flagged.append(f"{opt.flag}={raw}")
            elif opt.style == RenderStyle.POSITIONAL:
                positional.append(raw)
            else:  # FLAG_ONLY on a non-flag kind cannot occur (spec invariant)
                flagged.append(opt.flag)
    return flagged + positional


def assemble(session: SessionState) -> AssembledCommand:
    missing = unmet_required(session)
    if missing:
        raise MissingRequired(missing)
    argv = [session.spec.executable] + _option_argv(session)
    preview = " ".join(shell_quote(tok) for tok in argv)
    return AssembledCommand(argv=tuple(argv), preview=preview, cwd=session.working_dir)


def preview_text(session: SessionState) -> str:
    """Preview is allowed even with unmet required options; the partial
    command is followed by a marker line listing what is missing."""
    missing = unmet_required(session)
    argv = [session.spec.executable] + _option_argv(session)
    preview = " ".join(shell_quote(tok) for tok in argv)
    if missing:
        return preview + "\n" + MISSING_MARKER + " " + ", ".join(missing)
    return preview
