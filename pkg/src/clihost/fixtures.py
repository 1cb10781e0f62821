"""ArgSpec builders for the fixture programs shipped under fixtures/bin.

These double as the corpus for the emit subcommand and the doc-format
golden tests.
"""

from __future__ import annotations

from .argdoc import ArgSpec
from .model import OptionDef, OptionKind, RenderStyle


def argv_echo_argspec() -> ArgSpec:
    return ArgSpec(
        name="argv-echo",
        version="1.0",
        summary="print each argument on its own line",
        description=(
            "Echoes every command line argument, one per line, exactly as "
            "received from the operating system. Useful for checking how a "
            "front end passes arguments through."
        ),
        man_date="2026-01-01",
        options=(
            OptionDef(id="t", label="Threshold", kind=OptionKind.FLOAT,
                      flag="-t", required=True, style=RenderStyle.SEPARATE,
                      range=(0, 100),
                      doc="Threshold value between 0 and 100."),
            OptionDef(id="name", label="Sample name", kind=OptionKind.STRING,
                      flag="--name", style=RenderStyle.SEPARATE,
                      doc="Free-form name attached to the run."),
            OptionDef(id="count", label="Repeat count", kind=OptionKind.INT,
                      flag="--count", style=RenderStyle.SEPARATE,
                      default="1", range=(0, 1000000),
                      doc="How many repetitions to perform."),
            OptionDef(id="mode", label="Processing mode", kind=OptionKind.CHOICE,
                      flag="--mode", style=RenderStyle.EQUALS,
                      choices=(("fast", "Fast"), ("slow", "Slow")),
                      doc="Select the processing mode."),
            OptionDef(id="verbose", label="Verbose output", kind=OptionKind.FLAG,
                      flag="-v", style=RenderStyle.FLAG_ONLY,
                      doc="Emit extra progress information."),
            OptionDef(id="input", label="Input file", kind=OptionKind.INFILE,
                      flag="--in", style=RenderStyle.SEPARATE,
                      doc="Existing file to read from."),
            OptionDef(id="output", label="Output file", kind=OptionKind.OUTFILE,
                      flag="--out", style=RenderStyle.SEPARATE,
                      doc="File to write results to."),
            OptionDef(id="workdir", label="Work directory", kind=OptionKind.DIR,
                      flag="--dir", style=RenderStyle.SEPARATE,
                      doc="Directory used for temporary state."),
            OptionDef(id="include", label="Include pattern", kind=OptionKind.STRING,
                      flag="-I", repeatable=True, style=RenderStyle.SEPARATE,
                      doc="Pattern to include; may be given multiple times."),
            OptionDef(id="target", label="Target", kind=OptionKind.STRING,
                      style=RenderStyle.POSITIONAL,
                      doc="Positional target argument."),
        ),
    )


FIXTURE_ARGSPECS = {
    "argv-echo": argv_echo_argspec,
}
