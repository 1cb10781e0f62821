"""clihost: turn a CLI program described by an XML option spec into an
interactive host — option state machine, command assembly with preview,
execution with separate stdout/stderr capture, doc emission, and a local
HTTP service for the browser UI.
"""

from .model import (
    OptionDef,
    OptionGroup,
    OptionKind,
    OptionState,
    OptionValue,
    ProgramSpec,
    RenderStyle,
    SessionState,
    new_session,
    set_option,
    clear_option,
    reset_all,
    unmet_required,
    validate_value,
)
from .assemble import AssembledCommand, assemble, preview_text, shell_quote
from .specxml import (
    SpecDocument,
    ValidationReport,
    attach_values,
    parse_spec,
    serialize_spec,
    session_from_document,
    validate_document,
)
from .argdoc import ArgSpec, EmitFormat, ParsedArgs, emit, parse_argv
from .runner import RunRecord, await_run, kill_run, save_transcript, start_run

__version__ = "0.1.0"
