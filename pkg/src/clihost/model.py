"""In-memory data model: program specs, option definitions, and the
session state machine (required-unset / optional-unset / set).

Everything here is a pure value: operations return successor states and
never mutate their arguments, so snapshots are free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterator, Optional, Union

from .errors import (
    InvalidSpec,
    MutationDuringRun,
    OptionValueError,
    UnknownOption,
)

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


class OptionKind(str, Enum):
    FLAG = "flag"
    STRING = "string"
    INT = "int"
    FLOAT = "float"
    CHOICE = "choice"
    INFILE = "infile"
    OUTFILE = "outfile"
    DIR = "dir"


PATH_KINDS = (OptionKind.INFILE, OptionKind.OUTFILE, OptionKind.DIR)
NUMERIC_KINDS = (OptionKind.INT, OptionKind.FLOAT)


class RenderStyle(str, Enum):
    SEPARATE = "separate"      # --flag value (two argv entries)
    EQUALS = "equals"          # --flag=value (one entry)
    FLAG_ONLY = "flagonly"     # flag token alone
    POSITIONAL = "positional"  # bare value, no flag


ScalarPayload = Union[bool, str, int, float]


@dataclass(frozen=True)
class OptionValue:
    """One validated scalar, tagged with the kind it validated against."""

    kind: OptionKind
    value: ScalarPayload


@dataclass(frozen=True)
class OptionDef:
    id: str
    label: str
    kind: OptionKind
    flag: str = ""
    required: bool = False
    repeatable: bool = False
    style: RenderStyle = RenderStyle.SEPARATE
    default: Optional[str] = None  # raw form; editor pre-fill, never auto-set
    choices: tuple[tuple[str, str], ...] = ()  # (value, label)
    range: Optional[tuple[float, float]] = None
    doc: str = ""


@dataclass(frozen=True)
class OptionGroup:
    name: str
    doc: str = ""
    options: tuple[OptionDef, ...] = ()


@dataclass(frozen=True)
class ProgramSpec:
    name: str
    executable: str
    description: str = ""
    version: str = ""
    display_title: str = ""
    groups: tuple[OptionGroup, ...] = ()

    def option_defs(self) -> Iterator[OptionDef]:
        """All option definitions in document order."""
        for group in self.groups:
            yield from group.options

    def group_of(self, option_id: str) -> Optional[str]:
        for group in self.groups:
            for opt in group.options:
                if opt.id == option_id:
                    return group.name
        return None

    def find(self, option_id: str) -> OptionDef:
        for opt in self.option_defs():
            if opt.id == option_id:
                return opt
        raise UnknownOption(option_id)


# --- states ---------------------------------------------------------------

REQUIRED_UNSET = "required-unset"
OPTIONAL_UNSET = "optional-unset"
SET = "set"

STATE_COLORS = {
    REQUIRED_UNSET: "red",
    OPTIONAL_UNSET: "black",
    SET: "blue",
}


@dataclass(frozen=True)
class OptionState:
    status: str
    values: tuple[OptionValue, ...] = ()

    @property
    def color(self) -> str:
        return STATE_COLORS[self.status]

    @property
    def is_set(self) -> bool:
        return self.status == SET


def required_unset() -> OptionState:
    return OptionState(REQUIRED_UNSET)


def optional_unset() -> OptionState:
    return OptionState(OPTIONAL_UNSET)


def set_state(values: tuple[OptionValue, ...]) -> OptionState:
    if not values:
        raise ValueError("set state needs at least one value")
    return OptionState(SET, values)


def unset_state_for(definition: OptionDef) -> OptionState:
    return required_unset() if definition.required else optional_unset()


@dataclass(frozen=True)
class SessionState:
    spec: ProgramSpec
    states: dict[str, OptionState]
    working_dir: str
    active_run: Optional[str] = None

    def state_of(self, option_id: str) -> OptionState:
        try:
            return self.states[option_id]
        except KeyError:
            raise UnknownOption(option_id) from None


# --- spec invariant checking ---------------------------------------------

def check_spec(spec: ProgramSpec) -> None:
    """Raise InvalidSpec on the first violated invariant."""
    if not spec.executable:
        raise InvalidSpec("executable must be non-empty")
    seen_groups: set[str] = set()
    for group in spec.groups:
        if not group.name:
            raise InvalidSpec("group name must be non-empty")
        if group.name in seen_groups:
            raise InvalidSpec(f"duplicate group name: {group.name!r}")
        seen_groups.add(group.name)
    seen_ids: set[str] = set()
    for opt in spec.option_defs():
        if opt.id in seen_ids:
            raise InvalidSpec(f"duplicate option id: {opt.id!r}")
        seen_ids.add(opt.id)
        check_option_def(opt)


def check_option_def(opt: OptionDef) -> None:
    if not opt.id or any(c.isspace() for c in opt.id):
        raise InvalidSpec(f"option id must be non-empty without whitespace: {opt.id!r}")
    if opt.kind == OptionKind.CHOICE:
        if not opt.choices:
            raise InvalidSpec(f"option {opt.id!r}: Choice requires at least one choice")
        values = [v for v, _ in opt.choices]
        if len(values) != len(set(values)):
            raise InvalidSpec(f"option {opt.id!r}: duplicate choice values")
    elif opt.choices:
        raise InvalidSpec(f"option {opt.id!r}: choices only allowed for choice kind")
    if opt.range is not None:
        if opt.kind not in NUMERIC_KINDS:
            raise InvalidSpec(f"option {opt.id!r}: range only allowed for numeric kinds")
        lo, hi = opt.range
        if lo > hi:
            raise InvalidSpec(f"option {opt.id!r}: range min > max")
    if opt.kind == OptionKind.FLAG and opt.style != RenderStyle.FLAG_ONLY:
        raise InvalidSpec(f"option {opt.id!r}: flag kind requires flagonly style")
    if opt.style == RenderStyle.FLAG_ONLY and opt.kind != OptionKind.FLAG:
        raise InvalidSpec(f"option {opt.id!r}: flagonly style requires flag kind")
    if opt.style != RenderStyle.POSITIONAL and not opt.flag:
        raise InvalidSpec(f"option {opt.id!r}: non-positional option needs a flag token")
    if opt.default is not None:
        try:
            validate_value(opt, opt.default)
        except OptionValueError as exc:
            raise InvalidSpec(f"option {opt.id!r}: default does not validate: {exc.reason}")


# --- operations -----------------------------------------------------------

def new_session(spec: ProgramSpec, working_dir: str) -> SessionState:
    """Fresh session: every option unset, colored by its required flag.

    Defaults pre-fill editors only; they never count as set.
    """
    check_spec(spec)
    states = {opt.id: unset_state_for(opt) for opt in spec.option_defs()}
    return SessionState(spec=spec, states=states, working_dir=working_dir)


def validate_value(definition: OptionDef, raw: str) -> OptionValue:
    """Parse and range-check a raw string against an option definition.

    Total: every (def, raw) pair either returns a value or raises
    OptionValueError. Path kinds are checked syntactically only; existence
    is a run-time concern.
    """
    kind = definition.kind
    oid = definition.id
    if kind == OptionKind.FLAG:
        if raw == "true":
            return OptionValue(kind, True)
        if raw == "false":
            return OptionValue(kind, False)
        raise OptionValueError(oid, f"flag value must be 'true' or 'false', got {raw!r}")
    if kind == OptionKind.STRING:
        return OptionValue(kind, raw)
    if kind == OptionKind.INT:
        try:
            num = int(raw, 10)
        except ValueError:
            raise OptionValueError(oid, f"not an integer: {raw!r}")
        if not (INT64_MIN <= num <= INT64_MAX):
            raise OptionValueError(oid, f"outside 64-bit signed range: {raw}")
        _check_range(definition, num)
        return OptionValue(kind, num)
    if kind == OptionKind.FLOAT:
        try:
            num = float(raw)
        except ValueError:
            raise OptionValueError(oid, f"not a number: {raw!r}")
        if math.isnan(num) or math.isinf(num):
            raise OptionValueError(oid, f"not a finite number: {raw!r}")
        _check_range(definition, num)
        return OptionValue(kind, num)
    if kind == OptionKind.CHOICE:
        allowed = [v for v, _ in definition.choices]
        if raw not in allowed:  # case-sensitive on purpose
            raise OptionValueError(oid, f"unknown choice {raw!r}; allowed: {', '.join(allowed)}")
        return OptionValue(kind, raw)
    if kind in PATH_KINDS:
        if not raw:
            raise OptionValueError(oid, "path must be non-empty")
        if "\0" in raw:
            raise OptionValueError(oid, "path contains NUL")
        return OptionValue(kind, raw)
    raise OptionValueError(oid, f"unsupported kind: {kind}")


def _check_range(definition: OptionDef, num: float) -> None:
    if definition.range is None:
        return
    lo, hi = definition.range
    if not (lo <= num <= hi):
        raise OptionValueError(definition.id, f"value {num} outside range [{lo}, {hi}]")


def _mutable(session: SessionState) -> None:
    if session.active_run is not None:
        raise MutationDuringRun(f"run {session.active_run} is active")


def set_option(session: SessionState, option_id: str, raw: str) -> SessionState:
    _mutable(session)
    definition = session.spec.find(option_id)
    if option_id not in session.states:
        raise UnknownOption(option_id)
    value = validate_value(definition, raw)
    current = session.states[option_id]
    if definition.repeatable and current.is_set:
        values = current.values + (value,)
    else:
        values = (value,)
    states = dict(session.states)
    states[option_id] = set_state(values)
    return replace(session, states=states)


def clear_option(session: SessionState, option_id: str) -> SessionState:
    _mutable(session)
    definition = session.spec.find(option_id)
    if not session.states[option_id].is_set:
        return session  # idempotent
    states = dict(session.states)
    states[option_id] = unset_state_for(definition)
    return replace(session, states=states)


def reset_all(session: SessionState) -> SessionState:
    _mutable(session)
    states = {opt.id: unset_state_for(opt) for opt in session.spec.option_defs()}
    return replace(session, states=states)


def unmet_required(session: SessionState) -> list[str]:
    return [
        opt.id
        for opt in session.spec.option_defs()
        if session.states[opt.id].status == REQUIRED_UNSET
    ]


def with_active_run(session: SessionState, run_id: str) -> SessionState:
    return replace(session, active_run=run_id)


def without_active_run(session: SessionState) -> SessionState:
    return replace(session, active_run=None)


def render_raw(value: OptionValue) -> str:
    """Inverse of validate_value: the canonical raw form of a value."""
    if value.kind == OptionKind.FLAG:
        return "true" if value.value else "false"
    if value.kind == OptionKind.INT:
        return str(value.value)
    if value.kind == OptionKind.FLOAT:
        return format_float(float(value.value))
    return str(value.value)


def format_float(num: float) -> str:
    """Shortest decimal string that round-trips to the same float."""
    candidates = [repr(num)]
    if num.is_integer() and abs(num) < 1e17:
        candidates.append(str(int(num)))
    best = None
    for text in candidates:
        if float(text) == num and (best is None or len(text) < len(best)):
            best = text
    return best if best is not None else repr(num)
