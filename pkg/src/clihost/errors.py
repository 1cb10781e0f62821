"""Exception hierarchy shared across the package."""

from __future__ import annotations


class CliHostError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpec(CliHostError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class OptionValueError(CliHostError, ValueError):
    """A raw value failed to validate against an option definition."""

    def __init__(self, option_id: str, reason: str):
        super().__init__(f"{option_id}: {reason}")
        self.option_id = option_id
        self.reason = reason


class UnknownOption(CliHostError, KeyError):
    def __init__(self, option_id: str):
        super().__init__(option_id)
        self.option_id = option_id

    def __str__(self) -> str:
        return f"unknown option: {self.option_id}"


class MutationDuringRun(CliHostError):
    """Session mutation attempted while a run is active."""


class MissingRequired(CliHostError):
    def __init__(self, ids: list[str]):
        super().__init__("missing required options: " + ", ".join(ids))
        self.ids = list(ids)


class SpecMismatch(CliHostError):
    """The session's spec does not match the document's spec."""


class XmlSyntaxError(CliHostError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


class SchemaError(CliHostError):
    """Carries the full validation report (not fail-fast)."""

    def __init__(self, report):
        lines = "; ".join(f"{path}: {msg}" for path, msg in report.errors)
        super().__init__(lines or "schema validation failed")
        self.report = report


class ExecutableNotFound(CliHostError):
    def __init__(self, path: str):
        super().__init__(f"executable not found: {path}")
        self.path = path


class InputFileMissing(CliHostError):
    def __init__(self, option_id: str, path: str):
        super().__init__(f"input file for option {option_id!r} missing: {path}")
        self.option_id = option_id
        self.path = path


class SpawnFailed(CliHostError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class RunAlreadyActive(CliHostError):
    """Only one run may be active per session."""


class AlreadyTerminated(CliHostError):
    """Kill requested on a run that already reached a terminal status."""


class IoError(CliHostError, OSError):
    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class UnknownFlag(CliHostError):
    def __init__(self, token: str):
        super().__init__(f"unknown flag: {token}")
        self.token = token


class MissingValue(CliHostError):
    def __init__(self, flag: str):
        super().__init__(f"flag expects a value: {flag}")
        self.flag = flag


class DuplicateFlag(CliHostError):
    def __init__(self, option_id: str):
        super().__init__(f"option given more than once: {option_id}")
        self.option_id = option_id
