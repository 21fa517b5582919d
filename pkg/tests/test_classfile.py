from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import parse
from patchvm.classfile import (
    ClassDef,
    FieldDef,
    layout_signature,
    make_method,
    parse_class,
    serialize_class,
    verify_classpath,
)
from patchvm.errors import ParseError, VerifyError


def test_empty_class():
    c = parse("class A { }")
    assert c.name == "A"
    assert c.superclass is None
    assert c.fields == [] and c.methods == []
    assert not c.has_static_init


def test_constant_field_attributes():
    c = parse("class A { static final int K = 3 }")
    (k,) = c.fields
    assert k.constant_value == 3
    assert k.is_final and k.kind == "static" and k.type == "int"


def test_malformed_input_names_line():
    with pytest.raises(ParseError) as exc:
        parse_class("class A { static int")
    assert exc.value.line == 1


@pytest.mark.parametrize(
    "src",
    [
        "class A {\n  int x\n  int x\n}",  # duplicate field
        "class A {\n  static fn m(0) { return }\n  static fn m(0) { return }\n}",  # duplicate method
        "class A {\n  init { return }\n  init { return }\n}",  # two initializers
    ],
)
def test_duplicate_members_rejected(src):
    with pytest.raises(VerifyError):
        parse_class(src)


def test_unbalanced_stack_rejected():
    with pytest.raises(VerifyError, match="underflow"):
        parse(
            """
            class A {
              static fn m(0) {
                add
                return
              }
            }
            """
        )


def test_unresolved_label_rejected():
    with pytest.raises(VerifyError, match="label"):
        parse(
            """
            class A {
              static fn m(0) {
                jump nowhere
                return
              }
            }
            """
        )


def test_inconsistent_branch_depth_rejected():
    with pytest.raises(VerifyError, match="inconsistent"):
        parse(
            """
            class A {
              static fn m(0) {
                const true
                jumpif skip
                const 1
                label skip
                return
              }
            }
            """
        )


def test_mixed_return_kinds_rejected():
    with pytest.raises(VerifyError, match="mixes"):
        parse(
            """
            class A {
              static fn m(0) {
                const true
                jumpif out
                return
                label out
                const 1
                returnval
              }
            }
            """
        )


def test_constant_assignment_in_initializer_rejected():
    with pytest.raises(VerifyError, match="constant"):
        parse(
            """
            class A {
              static final int K = 3
              init {
                const 4
                putstatic A.K
                return
              }
            }
            """
        )


def test_initializer_on_non_constant_field_rejected():
    with pytest.raises(ParseError):
        parse("class A {\n  int x = 3\n}")
    with pytest.raises(ParseError):
        parse("class A {\n  static final ref r = 3\n}")


def test_literal_type_mismatch_rejected():
    with pytest.raises(ParseError):
        parse('class A {\n  static final int K = "three"\n}')


def test_roundtrip_empty_and_initializer():
    empty = parse("class A { }")
    assert parse_class(serialize_class(empty)) == empty

    c = parse(
        """
        class B extends A {
          static int x
          init {
            const 2
            putstatic B.x
            return
          }
        }
        """
    )
    text = serialize_class(c)
    assert "init {" in text
    assert parse_class(text) == c


def test_roundtrip_literals():
    c = parse(
        """
        class Lits {
          static final float F = 2.5
          static final bool B = true
          static final string S = "a\\n\\"b\\\\c"
          static fn m(0) {
            const -3
            emit
            const 1.5e-3
            emit
            const null
            emit
            const false
            emit
            throw "stop \\t here"
          }
        }
        """
    )
    assert parse_class(serialize_class(c)) == c


def test_signature_ignores_bodies():
    a = parse("class A {\n  static fn m(0) {\n    const 1\n    returnval\n  }\n}")
    b = parse("class A {\n  static fn m(0) {\n    const 2\n    returnval\n  }\n}")
    assert layout_signature(a) == layout_signature(b)


def test_signature_detects_member_changes():
    base = parse("class A {\n  int x\n  static fn m(0) { return }\n}")
    extra_field = parse("class A {\n  int x\n  int y\n  static fn m(0) { return }\n}")
    renamed = parse("class A {\n  int x\n  static fn m2(0) { return }\n}")
    assert layout_signature(base) != layout_signature(extra_field)
    assert layout_signature(base) != layout_signature(renamed)


def test_cross_class_arity_checked_at_load():
    caller = parse(
        """
        class Caller {
          static fn go(0) {
            invokestatic Callee.f
            returnval
          }
        }
        """
    )
    callee_ok = parse("class Callee {\n  static fn f(0) {\n    const 1\n    returnval\n  }\n}")
    verify_classpath({c.name: c for c in (caller, callee_ok)})

    callee_void = parse("class Callee {\n  static fn f(0) { return }\n}")
    with pytest.raises(VerifyError):
        verify_classpath({c.name: c for c in (caller, callee_void)})


def test_conflicting_virtual_signatures_rejected():
    a = parse("class A {\n  fn m(1) { return }\n}")
    b = parse("class B {\n  fn m(2) { return }\n}")
    with pytest.raises(VerifyError, match="conflicting"):
        verify_classpath({"A": a, "B": b})


# --- round-trip property over generated class definitions -----------------

_IDENT = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)
_LITERAL = st.one_of(
    st.integers(-1000, 1000),
    st.booleans(),
    st.text(alphabet=st.characters(codec="ascii", exclude_characters='\x00\r'), max_size=8),
    st.floats(allow_nan=False, allow_infinity=False, width=32),
    st.none(),
)


@st.composite
def _stack_safe_body(draw, allow_returnval=True):
    """A straight-line body that never underflows, ending in a return."""
    depth = 0
    body = []
    for _ in range(draw(st.integers(0, 12))):
        choices = ["const", "listnew", "load"]
        if depth >= 1:
            choices += ["neg_like", "store", "emit"]
        if depth >= 2:
            choices += ["add_like", "eq"]
        op = draw(st.sampled_from(choices))
        if op == "const":
            body.append(("const", draw(_LITERAL)))
            depth += 1
        elif op == "listnew":
            body.append(("listnew",))
            depth += 1
        elif op == "load":
            body.append(("load", draw(st.integers(0, 3))))
            depth += 1
        elif op == "neg_like":
            body.append((draw(st.sampled_from(["neg", "not", "listlen"])),))
        elif op == "store":
            body.append(("store", draw(st.integers(0, 3))))
            depth -= 1
        elif op == "emit":
            body.append(("emit",))
            depth -= 1
        elif op == "add_like":
            body.append((draw(st.sampled_from(["add", "sub", "mul", "div", "lt", "le"])),))
            depth -= 1
        elif op == "eq":
            body.append(("eq",))
            depth -= 1
    if allow_returnval and depth and draw(st.booleans()):
        body.append(("returnval",))
    else:
        body.append(("return",))
    return body


@st.composite
def _class_defs(draw):
    name = draw(_IDENT).capitalize()
    fields = []
    used = set()
    for _ in range(draw(st.integers(0, 4))):
        fname = draw(_IDENT)
        if fname in used:
            continue
        used.add(fname)
        ftype = draw(st.sampled_from(["int", "float", "bool", "string", "ref"]))
        static = draw(st.booleans())
        final = draw(st.booleans())
        const = None
        if static and final and ftype != "ref" and draw(st.booleans()):
            const = {
                "int": draw(st.integers(-99, 99)),
                "float": draw(st.floats(allow_nan=False, allow_infinity=False, width=32)),
                "bool": draw(st.booleans()),
                "string": draw(st.text(max_size=5)),
            }[ftype]
        fields.append(FieldDef(fname, "static" if static else "instance", ftype, final, const))
    methods = []
    used = set()
    for _ in range(draw(st.integers(0, 3))):
        mname = draw(_IDENT)
        if mname in used:
            continue
        used.add(mname)
        methods.append(
            make_method(
                mname,
                draw(st.sampled_from(["static", "instance"])),
                draw(st.integers(0, 3)),
                draw(_stack_safe_body()),
            )
        )
    if draw(st.booleans()):
        methods.append(
            make_method("<clinit>", "static", 0, draw(_stack_safe_body(allow_returnval=False)))
        )
    return ClassDef(name, None, fields, methods)


@settings(max_examples=150, deadline=None)
@given(_class_defs())
def test_roundtrip_property(cls):
    text = serialize_class(cls)
    assert parse_class(text) == cls
