"""Parse, validate, and canonically serialize the XML program-spec format.

Validation is exhaustive (every violation reported, not fail-fast) and
strict: unknown elements or attributes are errors, which catches typos in
hand-written spec files. Serialization is canonical: fixed attribute
order, 2-space indent, UTF-8, LF line endings, so serialize(parse(x)) is
a fixpoint.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from typing import Optional
from xml.sax.saxutils import escape, quoteattr

from . import model
from .errors import SchemaError, SpecMismatch, XmlSyntaxError
from .model import (
    OptionDef,
    OptionGroup,
    OptionKind,
    ProgramSpec,
    RenderStyle,
    SessionState,
)

FORMAT_VERSION = "1.0"


@dataclass(frozen=True)
class SpecDocument:
    spec: ProgramSpec
    format_version: str = FORMAT_VERSION
    embedded_values: dict[str, list[str]] = field(default_factory=dict)


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    def error(self, path: str, message: str) -> None:
        self.errors.append((path, message))

    def warn(self, path: str, message: str) -> None:
        self.warnings.append((path, message))

    @property
    def ok(self) -> bool:
        return not self.errors


_PROGRAM_ATTRS = ("name", "executable", "version")
_OPTION_ATTRS = ("id", "flag", "kind", "required", "repeatable", "style")
_BOOL_WORDS = {"true": True, "false": False}


def _parse_tree(xml_bytes: bytes) -> ET.Element:
    try:
        return ET.fromstring(xml_bytes)
    except ET.ParseError as exc:
        line, col = exc.position if exc.position else (0, 0)
        raise XmlSyntaxError(line, col, str(exc)) from None


def parse_spec(xml_bytes: bytes) -> SpecDocument:
    """Full parse: raises XmlSyntaxError on malformed XML, SchemaError
    (carrying the complete report) on any structural/semantic violation."""
    root = _parse_tree(xml_bytes)
    report = ValidationReport()
    doc = _build_document(root, report)
    if report.errors or doc is None:
        raise SchemaError(report)
    return doc


def validate_document(xml_bytes: bytes) -> ValidationReport:
    """Errors are data here; the document loads iff report.errors is empty."""
    try:
        root = _parse_tree(xml_bytes)
    except XmlSyntaxError as exc:
        report = ValidationReport()
        report.error("document", f"XML syntax error: {exc}")
        return report
    report = ValidationReport()
    _build_document(root, report)
    return report


def _text(elem: ET.Element) -> str:
    return (elem.text or "").strip()


def _check_attrs(elem: ET.Element, allowed: tuple[str, ...], path: str,
                 report: ValidationReport) -> None:
    for attr in elem.attrib:
        if attr not in allowed:
            report.error(path, f"unknown attribute {attr!r} on <{elem.tag}>")


def _build_document(root: ET.Element, report: ValidationReport) -> Optional[SpecDocument]:
    if root.tag != "guiliner":
        report.error("document", f"root element must be <guiliner>, got <{root.tag}>")
        return None
    _check_attrs(root, ("version",), "guiliner", report)
    version = root.get("version", "")
    if version != FORMAT_VERSION:
        report.error("guiliner", f"unsupported format version {version!r} (expected {FORMAT_VERSION!r})")

    program: Optional[ET.Element] = None
    display: Optional[ET.Element] = None
    group_elems: list[ET.Element] = []
    for child in root:
        if child.tag == "program":
            if program is not None:
                report.error("guiliner", "more than one <program> element")
            program = child
        elif child.tag == "display":
            if display is not None:
                report.error("guiliner", "more than one <display> element")
            display = child
        elif child.tag == "group":
            group_elems.append(child)
        else:
            report.error("guiliner", f"unknown element <{child.tag}>")

    name = executable = prog_version = description = ""
    if program is None:
        report.error("guiliner", "missing <program> element")
    else:
        _check_attrs(program, _PROGRAM_ATTRS, "program", report)
        name = program.get("name", "")
        executable = program.get("executable", "")
        prog_version = program.get("version", "")
        if not name:
            report.error("program", "missing or empty name attribute")
        if not executable:
            report.error("program", "missing or empty executable attribute")
        for child in program:
            if child.tag == "description":
                description = _text(child)
            else:
                report.error("program", f"unknown element <{child.tag}>")

    display_title = name
    if display is not None:
        _check_attrs(display, ("title",), "display", report)
        display_title = display.get("title", name)
        if len(display) > 0:
            report.error("display", "display element takes no children")

    groups: list[OptionGroup] = []
    embedded: dict[str, list[str]] = {}
    seen_groups: dict[str, str] = {}
    seen_ids: dict[str, str] = {}
    for gi, gelem in enumerate(group_elems, start=1):
        gpath = f"group[{gi}]"
        _check_attrs(gelem, ("name",), gpath, report)
        gname = gelem.get("name", "")
        if not gname:
            report.error(gpath, "missing or empty group name")
        elif gname in seen_groups:
            report.error(gpath, f"duplicate group name {gname!r} (also at {seen_groups[gname]})")
        else:
            seen_groups[gname] = gpath
        gdoc = ""
        options: list[OptionDef] = []
        oi = 0
        for child in gelem:
            if child.tag == "doc":
                gdoc = _text(child)
            elif child.tag == "option":
                oi += 1
                opath = f"{gpath}/option[{oi}]"
                opt, values = _build_option(child, opath, report)
                if opt is not None:
                    if opt.id in seen_ids:
                        report.error(opath, f"duplicate option id {opt.id!r} (also at {seen_ids[opt.id]})")
                    else:
                        seen_ids[opt.id] = opath
                        options.append(opt)
                        if values:
                            embedded[opt.id] = values
            else:
                report.error(gpath, f"unknown element <{child.tag}>")
        groups.append(OptionGroup(name=gname, doc=gdoc, options=tuple(options)))

    if report.errors:
        return None
    spec = ProgramSpec(
        name=name,
        executable=executable,
        description=description,
        version=prog_version,
        display_title=display_title,
        groups=tuple(groups),
    )
    doc = SpecDocument(spec=spec, format_version=version, embedded_values=embedded)
    _check_embedded(doc, report)
    if report.errors:
        return None
    return doc


def _build_option(elem: ET.Element, path: str,
                  report: ValidationReport) -> tuple[Optional[OptionDef], list[str]]:
    _check_attrs(elem, _OPTION_ATTRS, path, report)
    oid = elem.get("id", "")
    if not oid or any(c.isspace() for c in oid):
        report.error(path, f"option id must be non-empty without whitespace, got {oid!r}")
        return None, []
    path = f"{path}(id={oid})"

    kind_name = elem.get("kind", "")
    kind = None
    try:
        kind = OptionKind(kind_name)
    except ValueError:
        report.error(path, f"unknown kind {kind_name!r}")

    style_name = elem.get("style")
    style = None
    if style_name is None:
        style = RenderStyle.FLAG_ONLY if kind == OptionKind.FLAG else RenderStyle.SEPARATE
    else:
        try:
            style = RenderStyle(style_name)
        except ValueError:
            report.error(path, f"unknown style {style_name!r}")

    required = _bool_attr(elem, "required", path, report)
    repeatable = _bool_attr(elem, "repeatable", path, report)
    flag = elem.get("flag", "")

    label = doc = ""
    default: Optional[str] = None
    rng: Optional[tuple[float, float]] = None
    choices: list[tuple[str, str]] = []
    saw_choices = False
    values: list[str] = []
    for child in elem:
        if child.tag == "label":
            label = _text(child)
        elif child.tag == "doc":
            doc = _text(child)
        elif child.tag == "default":
            default = child.text or ""
        elif child.tag == "range":
            _check_attrs(child, ("min", "max"), path, report)
            rng = _parse_range(child, path, report)
        elif child.tag == "choices":
            saw_choices = True
            for ci, celem in enumerate(child, start=1):
                if celem.tag != "choice":
                    report.error(path, f"unknown element <{celem.tag}> in <choices>")
                    continue
                _check_attrs(celem, ("value", "label"), path, report)
                choices.append((celem.get("value", ""), celem.get("label", "")))
        elif child.tag == "value":
            values.append(child.text or "")
        else:
            report.error(path, f"unknown element <{child.tag}>")

    if kind is None or style is None or required is None or repeatable is None:
        return None, []

    if kind == OptionKind.CHOICE:
        if not choices:
            report.error(path, "Choice requires at least one choice")
            return None, []
        seen = set()
        for value, _ in choices:
            if value in seen:
                report.error(path, f"duplicate choice value {value!r}")
                return None, []
            seen.add(value)
    elif saw_choices:
        report.error(path, "choices only allowed for choice kind")
        return None, []

    if rng is not None and kind not in model.NUMERIC_KINDS:
        report.error(path, "range only allowed for int/float kinds")
        return None, []
    if rng is None and elem.find("range") is not None:
        return None, []  # range parse already reported

    if kind == OptionKind.FLAG and style != RenderStyle.FLAG_ONLY:
        report.error(path, "flag kind requires flagonly style")
        return None, []
    if style == RenderStyle.FLAG_ONLY and kind != OptionKind.FLAG:
        report.error(path, "flagonly style requires flag kind")
        return None, []
    if style != RenderStyle.POSITIONAL and not flag:
        report.error(path, "non-positional option needs a flag token")
        return None, []
    if len(values) > 1 and not repeatable:
        report.error(path, "multiple value elements on a non-repeatable option")
        return None, []

    opt = OptionDef(
        id=oid, label=label, kind=kind, flag=flag, required=required,
        repeatable=repeatable, style=style, default=default,
        choices=tuple(choices), range=rng, doc=doc,
    )
    if default is not None:
        try:
            model.validate_value(opt, default)
        except model.OptionValueError as exc:
            report.error(path, f"default does not validate: {exc.reason}")
            return None, []
    return opt, values


def _bool_attr(elem: ET.Element, attr: str, path: str,
               report: ValidationReport) -> Optional[bool]:
    raw = elem.get(attr, "false")
    if raw not in _BOOL_WORDS:
        report.error(path, f"{attr} must be 'true' or 'false', got {raw!r}")
        return None
    return _BOOL_WORDS[raw]


def _parse_range(elem: ET.Element, path: str,
                 report: ValidationReport) -> Optional[tuple[float, float]]:
    try:
        lo = float(elem.get("min", ""))
        hi = float(elem.get("max", ""))
    except ValueError:
        report.error(path, "range min/max must be numeric")
        return None
    if lo > hi:
        report.error(path, "range min > max")
        return None
    return (lo, hi)


def _check_embedded(doc: SpecDocument, report: ValidationReport) -> None:
    for oid, raws in doc.embedded_values.items():
        opt = doc.spec.find(oid)
        for raw in raws:
            try:
                model.validate_value(opt, raw)
            except model.OptionValueError as exc:
                report.error(f"option(id={oid})", f"saved value does not validate: {exc.reason}")


# --- serialization --------------------------------------------------------

def serialize_spec(doc: SpecDocument) -> bytes:
    """Canonical form: fixed attribute order, 2-space indent, LF, UTF-8."""
    spec = doc.spec
    out: list[str] = []
    out.append(f'<guiliner version={quoteattr(doc.format_version)}>')
    out.append(
        f'  <program name={quoteattr(spec.name)} '
        f'executable={quoteattr(spec.executable)} '
        f'version={quoteattr(spec.version)}>'
    )
    out.append(f'    <description>{escape(spec.description)}</description>')
    out.append('  </program>')
    out.append(f'  <display title={quoteattr(spec.display_title)}/>')
    for group in spec.groups:
        out.append(f'  <group name={quoteattr(group.name)}>')
        out.append(f'    <doc>{escape(group.doc)}</doc>')
        for opt in group.options:
            out.append(
                f'    <option id={quoteattr(opt.id)} flag={quoteattr(opt.flag)} '
                f'kind={quoteattr(opt.kind.value)} '
                f'required={quoteattr("true" if opt.required else "false")} '
                f'repeatable={quoteattr("true" if opt.repeatable else "false")} '
                f'style={quoteattr(opt.style.value)}>'
            )
            out.append(f'      <label>{escape(opt.label)}</label>')
            out.append(f'      <doc>{escape(opt.doc)}</doc>')
            if opt.default is not None:
                out.append(f'      <default>{escape(opt.default)}</default>')
            if opt.range is not None:
                lo, hi = opt.range
                out.append(
                    f'      <range min={quoteattr(_num(lo))} max={quoteattr(_num(hi))}/>'
                )
            if opt.choices:
                out.append('      <choices>')
                for value, label in opt.choices:
                    out.append(
                        f'        <choice value={quoteattr(value)} label={quoteattr(label)}/>'
                    )
                out.append('      </choices>')
            for raw in doc.embedded_values.get(opt.id, []):
                out.append(f'      <value>{escape(raw)}</value>')
            out.append('    </option>')
        out.append('  </group>')
    out.append('</guiliner>')
    return ("\n".join(out) + "\n").encode("utf-8")


def _num(value: float) -> str:
    return model.format_float(float(value))


# --- settings round-trip --------------------------------------------------

def attach_values(doc: SpecDocument, session: SessionState) -> SpecDocument:
    """Embed the session's set values so the saved file reloads into an
    identical session."""
    if session.spec != doc.spec:
        raise SpecMismatch("session spec differs from document spec")
    embedded: dict[str, list[str]] = {}
    for opt in session.spec.option_defs():
        state = session.states[opt.id]
        if state.is_set:
            embedded[opt.id] = [model.render_raw(v) for v in state.values]
    return replace(doc, embedded_values=embedded)


def session_from_document(doc: SpecDocument, working_dir: str) -> SessionState:
    """New session with the document's embedded values applied."""
    session = model.new_session(doc.spec, working_dir)
    for oid, raws in doc.embedded_values.items():
        for raw in raws:
            session = model.set_option(session, oid, raw)
    return session
