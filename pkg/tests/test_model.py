import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clihost import model
from clihost.errors import (
    InvalidSpec,
    MutationDuringRun,
    OptionValueError,
    UnknownOption,
)
from clihost.model import (
    INT64_MAX,
    INT64_MIN,
    OptionDef,
    OptionGroup,
    OptionKind,
    ProgramSpec,
    RenderStyle,
    clear_option,
    new_session,
    reset_all,
    set_option,
    unmet_required,
    validate_value,
    with_active_run,
)

from genspec import random_raw, random_session, random_spec


def simple_spec():
    return ProgramSpec(
        name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="a", label="A", kind=OptionKind.STRING,
                          flag="-a", required=True),
                OptionDef(id="b", label="B", kind=OptionKind.STRING, flag="-b"),
            )),
        ),
    )


class TestNewSession:
    def test_required_and_optional_states(self):
        session = new_session(simple_spec(), "/tmp")
        assert session.states["a"].status == model.REQUIRED_UNSET
        assert session.states["b"].status == model.OPTIONAL_UNSET

    def test_empty_spec(self):
        spec = ProgramSpec(name="p", executable="p")
        session = new_session(spec, "/tmp")
        assert session.states == {}

    def test_duplicate_ids_rejected(self):
        spec = ProgramSpec(name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="x", label="X", kind=OptionKind.STRING, flag="-x"),
                OptionDef(id="x", label="X2", kind=OptionKind.STRING, flag="-y"),
            )),
        ))
        with pytest.raises(InvalidSpec):
            new_session(spec, "/tmp")

    def test_default_is_not_set(self):
        spec = ProgramSpec(name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="n", label="N", kind=OptionKind.INT,
                          flag="-n", default="7"),
            )),
        ))
        session = new_session(spec, "/tmp")
        assert not session.states["n"].is_set


class TestValidateValue:
    def test_float_in_range(self):
        d = OptionDef(id="f", label="F", kind=OptionKind.FLOAT, flag="-f",
                      range=(0, 10))
        assert validate_value(d, "4.5").value == 4.5

    def test_float_out_of_range(self):
        d = OptionDef(id="f", label="F", kind=OptionKind.FLOAT, flag="-f",
                      range=(0, 10))
        with pytest.raises(OptionValueError):
            validate_value(d, "11")

    def test_unknown_choice(self):
        d = OptionDef(id="m", label="M", kind=OptionKind.CHOICE, flag="-m",
                      choices=(("hky", "HKY"), ("jc", "JC")))
        with pytest.raises(OptionValueError):
            validate_value(d, "gtr")

    @pytest.mark.parametrize("raw,ok", [
        (str(INT64_MAX), True),
        (str(INT64_MIN), True),
        (str(INT64_MAX + 1), False),
        (str(INT64_MIN - 1), False),
    ])
    def test_int_width_boundaries(self, raw, ok):
        # oracle: boundary enumeration at the decided 64-bit signed width
        d = OptionDef(id="n", label="N", kind=OptionKind.INT, flag="-n")
        if ok:
            assert validate_value(d, raw).value == int(raw)
        else:
            with pytest.raises(OptionValueError):
                validate_value(d, raw)

    def test_flag_accepts_only_true_false(self):
        d = OptionDef(id="v", label="V", kind=OptionKind.FLAG, flag="-v",
                      style=RenderStyle.FLAG_ONLY)
        assert validate_value(d, "true").value is True
        assert validate_value(d, "false").value is False
        with pytest.raises(OptionValueError):
            validate_value(d, "yes")

    def test_nonfinite_float_rejected(self):
        d = OptionDef(id="f", label="F", kind=OptionKind.FLOAT, flag="-f")
        for raw in ("nan", "inf", "-inf"):
            with pytest.raises(OptionValueError):
                validate_value(d, raw)

    @given(raw=st.text(max_size=30))
    @settings(max_examples=300, deadline=None)
    def test_totality_never_panics(self, raw):
        # every (def, raw) either validates or raises OptionValueError
        defs = [
            OptionDef(id="n", label="N", kind=OptionKind.INT, flag="-n", range=(0, 9)),
            OptionDef(id="f", label="F", kind=OptionKind.FLOAT, flag="-f"),
            OptionDef(id="s", label="S", kind=OptionKind.STRING, flag="-s"),
            OptionDef(id="v", label="V", kind=OptionKind.FLAG, flag="-v",
                      style=RenderStyle.FLAG_ONLY),
            OptionDef(id="m", label="M", kind=OptionKind.CHOICE, flag="-m",
                      choices=(("a", "A"),)),
            OptionDef(id="p", label="P", kind=OptionKind.INFILE, flag="-p"),
        ]
        for d in defs:
            try:
                validate_value(d, raw)
            except OptionValueError:
                pass


class TestStateMachine:
    def test_set_then_others_unchanged(self):
        session = new_session(simple_spec(), "/tmp")
        session2 = set_option(session, "a", "4.0")
        assert session2.states["a"].is_set
        assert session2.states["b"] == session.states["b"]

    def test_set_unknown(self):
        session = new_session(simple_spec(), "/tmp")
        with pytest.raises(UnknownOption):
            set_option(session, "zz", "1")

    def test_repeatable_appends_in_order(self):
        spec = ProgramSpec(name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="inc", label="I", kind=OptionKind.STRING,
                          flag="-I", repeatable=True),
            )),
        ))
        session = new_session(spec, "/tmp")
        session = set_option(session, "inc", "a")
        session = set_option(session, "inc", "b")
        assert [v.value for v in session.states["inc"].values] == ["a", "b"]

    def test_clear_required_returns_red(self):
        session = set_option(new_session(simple_spec(), "/tmp"), "a", "x")
        session = clear_option(session, "a")
        assert session.states["a"].status == model.REQUIRED_UNSET
        assert session.states["a"].color == "red"

    def test_clear_idempotent(self):
        session = new_session(simple_spec(), "/tmp")
        assert clear_option(session, "b") == session

    def test_clear_unknown(self):
        with pytest.raises(UnknownOption):
            clear_option(new_session(simple_spec(), "/tmp"), "zz")

    def test_reset_equals_fresh(self):
        fresh = new_session(simple_spec(), "/tmp")
        session = set_option(set_option(fresh, "a", "1"), "b", "2")
        assert reset_all(session).states == fresh.states

    def test_reset_identity_on_fresh(self):
        fresh = new_session(simple_spec(), "/tmp")
        assert reset_all(fresh) == fresh

    def test_unmet_required_in_document_order(self):
        spec = ProgramSpec(name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="a", label="A", kind=OptionKind.STRING,
                          flag="-a", required=True),
                OptionDef(id="b", label="B", kind=OptionKind.STRING, flag="-b"),
                OptionDef(id="c", label="C", kind=OptionKind.STRING,
                          flag="-c", required=True),
            )),
        ))
        session = new_session(spec, "/tmp")
        assert unmet_required(session) == ["a", "c"]
        assert unmet_required(set_option(session, "a", "x")) == ["c"]

    def test_no_required_options(self):
        spec = ProgramSpec(name="p", executable="p", groups=(
            OptionGroup(name="g", options=(
                OptionDef(id="b", label="B", kind=OptionKind.STRING, flag="-b"),
            )),
        ))
        assert unmet_required(new_session(spec, "/tmp")) == []

    def test_mutation_during_run_forbidden(self):
        session = with_active_run(new_session(simple_spec(), "/tmp"), "run1")
        with pytest.raises(MutationDuringRun):
            set_option(session, "a", "x")
        with pytest.raises(MutationDuringRun):
            reset_all(session)

    def test_color_legend(self):
        assert model.required_unset().color == "red"
        assert model.optional_unset().color == "black"
        d = OptionDef(id="s", label="S", kind=OptionKind.STRING, flag="-s")
        value = validate_value(d, "x")
        assert model.set_state((value,)).color == "blue"


def test_randomized_sequences_hold_invariants():
    # required-correspondence, set-clear identity, reset = fold of clear
    rng = random.Random(7)
    for _ in range(100):
        spec = random_spec(rng)
        session = new_session(spec, "/tmp")
        baseline = session
        defs = list(spec.option_defs())
        if not defs:
            continue
        for _ in range(rng.randint(1, 20)):
            opt = rng.choice(defs)
            op = rng.random()
            if op < 0.6:
                before = session
                session = set_option(session, opt.id, random_raw(rng, opt))
                if not opt.repeatable or not before.states[opt.id].is_set:
                    cleared = clear_option(session, opt.id)
                    assert cleared.states[opt.id] == model.unset_state_for(opt)
            elif op < 0.8:
                session = clear_option(session, opt.id)
            else:
                session = reset_all(session)
                assert session.states == baseline.states
            for d in defs:
                state = session.states[d.id]
                if state.status == model.REQUIRED_UNSET:
                    assert d.required
                elif state.status == model.OPTIONAL_UNSET:
                    assert not d.required
        folded = session
        for d in defs:
            folded = clear_option(folded, d.id)
        assert folded.states == reset_all(session).states == baseline.states
