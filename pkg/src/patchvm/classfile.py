"""Textual class format: parsing, serialization, verification, layout signatures.

One class per ``.cls`` file (UTF-8, ``//`` line comments)::

    class <Name> [extends <Name>] {
      [static] [final] <type> <name> [= <literal>]
      init { <instructions> }
      [static] fn <name>(<param-count>) { <instructions> }
    }

Field types are ``int float bool string ref``. A literal initializer is only
legal on a static final primitive/string field and marks the field as a
*constant variable*: reads of it are resolved at link time and never trigger
class initialization.

Instructions, one per line::

    const <lit>    load <i>      store <i>
    getstatic C.f  putstatic C.f getfield f   putfield f
    new C          invokestatic C.m            invokevirtual m
    add sub mul div neg eq lt le not
    label L        jump L        jumpif L
    return         returnval     assert        throw "msg"
    listnew listget listput listlen
    sysset sysget emit crashvm
    guard C

``guard C`` is inserted by the reset transformation in front of every
initialization-trigger instruction on a flagged class; it is inert unless an
epoch runtime is attached to the executing session.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError, VerifyError

PRIMITIVE_TYPES = ("int", "float", "bool", "string")
FIELD_TYPES = PRIMITIVE_TYPES + ("ref",)

CLINIT = "<clinit>"
REINIT_METHOD = "uniapr_clinit"

Instruction = tuple  # (mnemonic, *args), e.g. ("getstatic", "C", "f")


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class FieldDef:
    name: str
    kind: str  # "static" | "instance"
    type: str  # one of FIELD_TYPES
    is_final: bool = False
    constant_value: object = None  # literal for constant variables only

    def __post_init__(self):
        if self.constant_value is not None:
            if not (self.is_final and self.kind == "static" and self.type in PRIMITIVE_TYPES):
                raise VerifyError(
                    f"field {self.name}: constant value requires a static final primitive/string field"
                )


@dataclass(frozen=True, eq=True)
class MethodDef:
    name: str
    kind: str  # "static" | "instance"
    params: int
    body: tuple  # tuple of Instruction
    labels: dict = field(default_factory=dict, compare=False)
    returns_value: bool = field(default=False, compare=False)


def make_method(name: str, kind: str, params: int, body) -> MethodDef:
    """Build a MethodDef with its label index and return-kind derived from the body."""
    body = tuple(tuple(ins) for ins in body)
    labels: dict[str, int] = {}
    for i, ins in enumerate(body):
        if ins[0] == "label":
            if ins[1] in labels:
                raise VerifyError(f"duplicate label {ins[1]!r} in method {name}")
            labels[ins[1]] = i
    method = MethodDef(name, kind, params, body)
    object.__setattr__(method, "labels", labels)
    object.__setattr__(method, "returns_value", any(ins[0] == "returnval" for ins in body))
    return method


@dataclass
class ClassDef:
    name: str
    superclass: str | None
    fields: list[FieldDef]
    methods: list[MethodDef]

    @property
    def has_static_init(self) -> bool:
        return any(m.name == CLINIT for m in self.methods)

    def field_def(self, name: str) -> FieldDef | None:
        for f in self.fields:
            if f.name == name:
                return f
        return None

    def method_def(self, name: str) -> MethodDef | None:
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class LayoutSignature:
    name: str
    superclass: str | None
    fields: tuple  # (name, kind, type, is_final) per field, declaration order
    methods: tuple  # (name, kind, params) per method, declaration order


def layout_signature(c: ClassDef) -> LayoutSignature:
    return LayoutSignature(
        c.name,
        c.superclass,
        tuple((f.name, f.kind, f.type, f.is_final) for f in c.fields),
        tuple((m.name, m.kind, m.params) for m in c.methods),
    )


# ---------------------------------------------------------------------------
# Instruction metadata

# mnemonic -> argument shape
_SHAPES = {
    "const": "lit",
    "load": "index",
    "store": "index",
    "getstatic": "dotted",
    "putstatic": "dotted",
    "getfield": "name",
    "putfield": "name",
    "new": "name",
    "invokestatic": "dotted",
    "invokevirtual": "name",
    "add": "none", "sub": "none", "mul": "none", "div": "none",
    "neg": "none", "eq": "none", "lt": "none", "le": "none", "not": "none",
    "label": "name",
    "jump": "name",
    "jumpif": "name",
    "return": "none",
    "returnval": "none",
    "assert": "none",
    "throw": "string",
    "listnew": "none", "listget": "none", "listput": "none", "listlen": "none",
    "sysset": "none", "sysget": "none",
    "emit": "none",
    "crashvm": "none",
    "guard": "name",
}

# mnemonic -> (pops, pushes) for instructions with a fixed stack effect
_FIXED_EFFECTS = {
    "const": (0, 1),
    "load": (0, 1),
    "store": (1, 0),
    "getstatic": (0, 1),
    "putstatic": (1, 0),
    "getfield": (1, 1),
    "putfield": (2, 0),
    "new": (0, 1),
    "add": (2, 1), "sub": (2, 1), "mul": (2, 1), "div": (2, 1),
    "eq": (2, 1), "lt": (2, 1), "le": (2, 1),
    "neg": (1, 1), "not": (1, 1),
    "label": (0, 0),
    "jump": (0, 0),
    "jumpif": (1, 0),
    "return": (0, 0),
    "returnval": (1, 0),
    "assert": (1, 0),
    "throw": (0, 0),
    "listnew": (0, 1),
    "listget": (2, 1),
    "listput": (3, 0),
    "listlen": (1, 1),
    "sysset": (2, 0),
    "sysget": (1, 1),
    "emit": (1, 0),
    "crashvm": (0, 0),
    "guard": (0, 0),
}

_TERMINAL = frozenset(("return", "returnval", "throw", "crashvm"))


# ---------------------------------------------------------------------------
# Lexer

_NUMBER_RE = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][+-]?\d+)?")
_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "t": "\t"}
_UNESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\t": "\\t"}


@dataclass(frozen=True)
class _Token:
    kind: str  # int | float | str | ident | punct
    value: object
    line: int
    col: int


def _lex_line(text: str, lineno: int) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r":
            i += 1
            continue
        if ch == "/" and text[i : i + 2] == "//":
            break
        col = i + 1
        if ch == '"':
            i += 1
            buf: list[str] = []
            while True:
                if i >= n:
                    raise ParseError("unterminated string literal", lineno, col)
                c = text[i]
                if c == "\\":
                    if i + 1 >= n or text[i + 1] not in _ESCAPES:
                        raise ParseError("bad escape in string literal", lineno, i + 1)
                    buf.append(_ESCAPES[text[i + 1]])
                    i += 2
                elif c == '"':
                    i += 1
                    break
                else:
                    buf.append(c)
                    i += 1
            tokens.append(_Token("str", "".join(buf), lineno, col))
            continue
        m = _NUMBER_RE.match(text, i)
        if m and (ch.isdigit() or (ch == "-" and len(m.group()) > 1)):
            word = m.group()
            i = m.end()
            if "." in word or "e" in word or "E" in word:
                tokens.append(_Token("float", float(word), lineno, col))
            else:
                tokens.append(_Token("int", int(word), lineno, col))
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(_Token("ident", m.group(), lineno, col))
            i = m.end()
            continue
        if ch in "{}()=.":
            tokens.append(_Token("punct", ch, lineno, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", lineno, col)
    return tokens


# ---------------------------------------------------------------------------
# Parser

_LITERAL_IDENTS = {"true": True, "false": False, "null": None}


def _parse_literal(tokens: list[_Token], pos: int, lineno: int) -> tuple[object, int]:
    if pos >= len(tokens):
        raise ParseError("expected literal", lineno, 1)
    tok = tokens[pos]
    if tok.kind in ("int", "float", "str"):
        return tok.value, pos + 1
    if tok.kind == "ident" and tok.value in _LITERAL_IDENTS:
        return _LITERAL_IDENTS[tok.value], pos + 1
    raise ParseError(f"expected literal, got {tok.value!r}", tok.line, tok.col)


def _expect_ident(tokens: list[_Token], pos: int, what: str, lineno: int) -> tuple[str, int]:
    if pos >= len(tokens) or tokens[pos].kind != "ident":
        tok = tokens[pos] if pos < len(tokens) else None
        raise ParseError(
            f"expected {what}" + (f", got {tok.value!r}" if tok else ""),
            tok.line if tok else lineno,
            tok.col if tok else 1,
        )
    return tokens[pos].value, pos + 1


def _expect_punct(tokens: list[_Token], pos: int, ch: str, lineno: int) -> int:
    if pos >= len(tokens) or tokens[pos].kind != "punct" or tokens[pos].value != ch:
        tok = tokens[pos] if pos < len(tokens) else None
        raise ParseError(
            f"expected {ch!r}" + (f", got {tok.value!r}" if tok else ""),
            tok.line if tok else lineno,
            tok.col if tok else 1,
        )
    return pos + 1


def parse_instruction(tokens: list[_Token], lineno: int) -> Instruction:
    mnemonic, pos = _expect_ident(tokens, 0, "instruction", lineno)
    shape = _SHAPES.get(mnemonic)
    if shape is None:
        raise ParseError(f"unknown instruction {mnemonic!r}", tokens[0].line, tokens[0].col)
    if shape == "none":
        args: tuple = ()
    elif shape == "lit":
        value, pos = _parse_literal(tokens, pos, lineno)
        args = (value,)
    elif shape == "index":
        if pos >= len(tokens) or tokens[pos].kind != "int" or tokens[pos].value < 0:
            raise ParseError(f"{mnemonic} expects a non-negative slot index", lineno, 1)
        args = (tokens[pos].value,)
        pos += 1
    elif shape == "name":
        name, pos = _expect_ident(tokens, pos, f"name after {mnemonic}", lineno)
        args = (name,)
    elif shape == "dotted":
        cls, pos = _expect_ident(tokens, pos, "class name", lineno)
        pos = _expect_punct(tokens, pos, ".", lineno)
        member, pos = _expect_ident(tokens, pos, "member name", lineno)
        args = (cls, member)
    elif shape == "string":
        if pos >= len(tokens) or tokens[pos].kind != "str":
            raise ParseError(f"{mnemonic} expects a string literal", lineno, 1)
        args = (tokens[pos].value,)
        pos += 1
    else:  # pragma: no cover - shape table is closed
        raise AssertionError(shape)
    if pos != len(tokens):
        tok = tokens[pos]
        raise ParseError(f"trailing tokens after instruction {mnemonic!r}", tok.line, tok.col)
    return (mnemonic,) + args


def _parse_field_line(tokens: list[_Token], lineno: int) -> FieldDef:
    pos = 0
    is_static = False
    is_final = False
    while pos < len(tokens) and tokens[pos].kind == "ident" and tokens[pos].value in ("static", "final"):
        word = tokens[pos].value
        if word == "static":
            if is_static:
                raise ParseError("duplicate 'static' modifier", tokens[pos].line, tokens[pos].col)
            is_static = True
        else:
            if is_final:
                raise ParseError("duplicate 'final' modifier", tokens[pos].line, tokens[pos].col)
            is_final = True
        pos += 1
    if pos >= len(tokens) or tokens[pos].kind != "ident" or tokens[pos].value not in FIELD_TYPES:
        tok = tokens[pos] if pos < len(tokens) else tokens[-1]
        raise ParseError("expected field type", tok.line, tok.col)
    ftype = tokens[pos].value
    pos += 1
    name, pos = _expect_ident(tokens, pos, "field name", lineno)
    constant_value = None
    if pos < len(tokens):
        eq_tok = tokens[pos]
        pos = _expect_punct(tokens, pos, "=", lineno)
        if not (is_static and is_final and ftype in PRIMITIVE_TYPES):
            raise ParseError(
                "literal initializer requires a static final primitive/string field",
                eq_tok.line,
                eq_tok.col,
            )
        constant_value, pos = _parse_literal(tokens, pos, lineno)
        expected = {"int": int, "float": float, "bool": bool, "string": str}[ftype]
        if type(constant_value) is not expected:
            raise ParseError(f"literal does not match field type {ftype}", eq_tok.line, eq_tok.col)
        if pos != len(tokens):
            raise ParseError("trailing tokens after field", tokens[pos].line, tokens[pos].col)
    kind = "static" if is_static else "instance"
    return FieldDef(name, kind, ftype, is_final, constant_value)


class _Lines:
    def __init__(self, text: str):
        self.lines = text.split("\n")
        self.pos = 0

    def next_tokens(self) -> tuple[list[_Token], int] | None:
        """Next non-empty token line, or None at end of input."""
        while self.pos < len(self.lines):
            lineno = self.pos + 1
            tokens = _lex_line(self.lines[self.pos], lineno)
            self.pos += 1
            if tokens:
                return tokens, lineno
        return None


def _is_close_brace(tokens: list[_Token]) -> bool:
    return len(tokens) == 1 and tokens[0].kind == "punct" and tokens[0].value == "}"


def _parse_block_body(lines: _Lines, opened_at: int) -> list[Instruction]:
    body: list[Instruction] = []
    while True:
        nxt = lines.next_tokens()
        if nxt is None:
            raise ParseError("unexpected end of input inside block", opened_at, 1)
        tokens, lineno = nxt
        if _is_close_brace(tokens):
            return body
        body.append(parse_instruction(tokens, lineno))


def parse_class(text: str) -> ClassDef:
    """Parse one class; raises ParseError on bad syntax, VerifyError on bad structure."""
    lines = _Lines(text)
    header = lines.next_tokens()
    if header is None:
        raise ParseError("empty input", 1, 1)
    tokens, lineno = header
    pos = 0
    if tokens[pos].kind != "ident" or tokens[pos].value != "class":
        raise ParseError("expected 'class'", tokens[pos].line, tokens[pos].col)
    pos += 1
    name, pos = _expect_ident(tokens, pos, "class name", lineno)
    superclass = None
    if pos < len(tokens) and tokens[pos].kind == "ident" and tokens[pos].value == "extends":
        pos += 1
        superclass, pos = _expect_ident(tokens, pos, "superclass name", lineno)
    pos = _expect_punct(tokens, pos, "{", lineno)

    fields: list[FieldDef] = []
    methods: list[MethodDef] = []
    closed = False

    if pos < len(tokens):
        # the only legal same-line continuation is an immediate '}'
        if tokens[pos].kind == "punct" and tokens[pos].value == "}" and pos + 1 == len(tokens):
            closed = True
        else:
            raise ParseError("unexpected tokens after '{'", tokens[pos].line, tokens[pos].col)

    while not closed:
        nxt = lines.next_tokens()
        if nxt is None:
            raise ParseError("unexpected end of input inside class body", lineno, 1)
        tokens, member_line = nxt
        if _is_close_brace(tokens):
            closed = True
            break
        first = tokens[0]
        if first.kind != "ident":
            raise ParseError("expected class member", first.line, first.col)
        if first.value == "init":
            brace = _expect_punct(tokens, 1, "{", member_line)
            if brace < len(tokens):
                if _is_close_brace(tokens[brace:]):
                    body: list[Instruction] = []
                else:
                    raise ParseError("instructions must be one per line", tokens[brace].line, tokens[brace].col)
            else:
                body = _parse_block_body(lines, member_line)
            if any(m.name == CLINIT for m in methods):
                raise VerifyError(f"duplicate member {CLINIT} in class {name}")
            methods.append(make_method(CLINIT, "static", 0, body))
            continue
        is_fn = first.value == "fn" or (
            first.value == "static" and len(tokens) > 1 and tokens[1].kind == "ident" and tokens[1].value == "fn"
        )
        if is_fn:
            pos2 = 0
            kind = "instance"
            if tokens[pos2].value == "static":
                kind = "static"
                pos2 += 1
            pos2 += 1  # 'fn'
            mname, pos2 = _expect_ident(tokens, pos2, "method name", member_line)
            pos2 = _expect_punct(tokens, pos2, "(", member_line)
            if pos2 >= len(tokens) or tokens[pos2].kind != "int" or tokens[pos2].value < 0:
                raise ParseError("expected parameter count", member_line, 1)
            params = tokens[pos2].value
            pos2 += 1
            pos2 = _expect_punct(tokens, pos2, ")", member_line)
            pos2 = _expect_punct(tokens, pos2, "{", member_line)
            if pos2 < len(tokens):
                if _is_close_brace(tokens[pos2:]):
                    body = []
                else:
                    raise ParseError("instructions must be one per line", tokens[pos2].line, tokens[pos2].col)
            else:
                body = _parse_block_body(lines, member_line)
            if any(m.name == mname for m in methods):
                raise VerifyError(f"duplicate member {mname} in class {name}")
            methods.append(make_method(mname, kind, params, body))
            continue
        # otherwise: a field declaration
        fdef = _parse_field_line(tokens, member_line)
        if any(f.name == fdef.name for f in fields):
            raise VerifyError(f"duplicate member {fdef.name} in class {name}")
        fields.append(fdef)

    trailing = lines.next_tokens()
    if trailing is not None:
        tok = trailing[0][0]
        raise ParseError("trailing content after class body", tok.line, tok.col)

    cls = ClassDef(name, superclass, fields, methods)
    verify_class(cls, None)
    return cls


# ---------------------------------------------------------------------------
# Serialization


def _format_literal(value) -> str:
    if value is None:
        return "null"
    if value is True:
        return "true"
    if value is False:
        return "false"
    if isinstance(value, str):
        out = []
        for ch in value:
            out.append(_UNESCAPES.get(ch, ch))
        return '"' + "".join(out) + '"'
    if isinstance(value, float):
        return repr(value)
    return str(value)


def serialize_instruction(ins: Instruction) -> str:
    mnemonic = ins[0]
    shape = _SHAPES[mnemonic]
    if shape == "none":
        return mnemonic
    if shape == "lit":
        return f"{mnemonic} {_format_literal(ins[1])}"
    if shape == "dotted":
        return f"{mnemonic} {ins[1]}.{ins[2]}"
    if shape == "string":
        return f"{mnemonic} {_format_literal(ins[1])}"
    return f"{mnemonic} {ins[1]}"


def serialize_class(c: ClassDef) -> str:
    out: list[str] = []
    head = f"class {c.name}"
    if c.superclass:
        head += f" extends {c.superclass}"
    out.append(head + " {")
    for f in c.fields:
        parts = []
        if f.kind == "static":
            parts.append("static")
        if f.is_final:
            parts.append("final")
        parts.append(f.type)
        parts.append(f.name)
        if f.constant_value is not None:
            parts.append("=")
            parts.append(_format_literal(f.constant_value))
        out.append("  " + " ".join(parts))
    for m in c.methods:
        if m.name == CLINIT:
            out.append("  init {")
        elif m.kind == "static":
            out.append(f"  static fn {m.name}({m.params}) {{")
        else:
            out.append(f"  fn {m.name}({m.params}) {{")
        for ins in m.body:
            out.append("    " + serialize_instruction(ins))
        out.append("  }")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Verification
#
# parse_class runs in local mode: references to other classes have unknown
# stack effects and taint the depth lattice instead of failing. Session load
# re-runs in strict mode against the full classpath, where every effect is
# known; only then is a class executable.

_UNKNOWN = object()  # unknown stack depth (local mode only)


def _static_signature(table, cls: ClassDef, target: str, method: str):
    """(params, returns_value) of target.method, None if unresolvable locally."""
    if table is not None:
        owner = table.get(target)
        if owner is None:
            raise VerifyError(f"unknown class {target!r} referenced from {cls.name}")
        m = owner.method_def(method)
        if m is None or m.kind != "static":
            raise VerifyError(f"unknown static method {target}.{method} referenced from {cls.name}")
        return m.params, m.returns_value
    if target == cls.name:
        m = cls.method_def(method)
        if m is None or m.kind != "static":
            raise VerifyError(f"unknown static method {target}.{method} referenced from {cls.name}")
        return m.params, m.returns_value
    return None


def _virtual_signatures(table) -> dict[str, tuple[int, bool]]:
    """Global name -> (params, returns_value) map; conflicting declarations are rejected."""
    sigs: dict[str, tuple[int, bool]] = {}
    for cls in table.values():
        for m in cls.methods:
            if m.kind != "instance":
                continue
            sig = (m.params, m.returns_value)
            if m.name in sigs and sigs[m.name] != sig:
                raise VerifyError(f"conflicting signatures for virtual method {m.name!r}")
            sigs[m.name] = sig
    return sigs


def _check_field_ref(table, cls: ClassDef, target: str, fname: str, write: bool):
    owner = None
    if table is not None:
        owner = table.get(target)
        if owner is None:
            raise VerifyError(f"unknown class {target!r} referenced from {cls.name}")
    elif target == cls.name:
        owner = cls
    if owner is None:
        return
    f = owner.field_def(fname)
    if f is None or f.kind != "static":
        raise VerifyError(f"unknown static field {target}.{fname} referenced from {cls.name}")
    if write and f.constant_value is not None:
        raise VerifyError(f"assignment to constant variable {target}.{fname}")


def _verify_method(cls: ClassDef, m: MethodDef, table, virtual_sigs):
    has_return = any(ins[0] == "return" for ins in m.body)
    if m.returns_value and has_return:
        raise VerifyError(f"method {cls.name}.{m.name} mixes return and returnval")
    if m.name == CLINIT and m.returns_value:
        raise VerifyError(f"{cls.name}: initializer cannot return a value")

    n = len(m.body)
    depths: dict[int, object] = {0: 0}
    work = [0]
    while work:
        i = work.pop()
        if i >= n:
            continue
        d = depths[i]
        ins = m.body[i]
        op = ins[0]

        # resolve stack effect
        if op == "invokestatic":
            sig = _static_signature(table, cls, ins[1], ins[2])
            effect = None if sig is None else (sig[0], 1 if sig[1] else 0)
        elif op == "invokevirtual":
            if table is not None:
                sig = virtual_sigs.get(ins[1])
                if sig is None:
                    raise VerifyError(f"no class declares instance method {ins[1]!r} (from {cls.name}.{m.name})")
            else:
                local = cls.method_def(ins[1])
                sig = (local.params, local.returns_value) if local is not None and local.kind == "instance" else None
            effect = None if sig is None else (sig[0] + 1, 1 if sig[1] else 0)
        else:
            effect = _FIXED_EFFECTS[op]
            if op in ("getstatic", "putstatic"):
                _check_field_ref(table, cls, ins[1], ins[2], write=op == "putstatic")
            elif op in ("new", "guard"):
                if table is not None and ins[1] not in table:
                    raise VerifyError(f"unknown class {ins[1]!r} referenced from {cls.name}")
            elif op in ("jump", "jumpif") and ins[1] not in m.labels:
                raise VerifyError(f"unresolved label {ins[1]!r} in {cls.name}.{m.name}")
            elif op in ("getfield", "putfield") and table is not None:
                if not any(
                    f.kind == "instance" and f.name == ins[1] for c in table.values() for f in c.fields
                ):
                    raise VerifyError(f"no class declares instance field {ins[1]!r} (from {cls.name}.{m.name})")

        if d is _UNKNOWN or effect is None:
            nd = _UNKNOWN
        else:
            pops, pushes = effect
            if d < pops:
                raise VerifyError(f"stack underflow in {cls.name}.{m.name} at instruction {i} ({op})")
            nd = d - pops + pushes

        if op in _TERMINAL:
            successors = []
        elif op == "jump":
            successors = [m.labels[ins[1]]]
        elif op == "jumpif":
            successors = [i + 1, m.labels[ins[1]]]
        else:
            successors = [i + 1]

        for s in successors:
            if s == n:
                if m.returns_value:
                    raise VerifyError(f"missing return value at end of {cls.name}.{m.name}")
                continue
            prev = depths.get(s)
            if prev is None:
                depths[s] = nd
                work.append(s)
            elif prev is _UNKNOWN or nd is _UNKNOWN:
                if prev is not _UNKNOWN:
                    depths[s] = _UNKNOWN
                    work.append(s)
            elif prev != nd:
                raise VerifyError(f"inconsistent stack depth at instruction {s} of {cls.name}.{m.name}")


def verify_class(cls: ClassDef, table: dict[str, ClassDef] | None, only: set | None = None):
    """Verify one class. table=None is local (parse-time) mode; a full table is
    strict. ``only`` restricts the per-method dataflow to the named methods
    (used when a redefinition changed a known subset of bodies)."""
    clinit = cls.method_def(CLINIT)
    if clinit is not None and (clinit.kind != "static" or clinit.params != 0):
        raise VerifyError(f"{cls.name}: initializer must be static and take no parameters")
    # a constant variable is never an initializer assignment target
    if clinit is not None:
        for ins in clinit.body:
            if ins[0] == "putstatic" and ins[1] == cls.name:
                f = cls.field_def(ins[2])
                if f is not None and f.constant_value is not None:
                    raise VerifyError(f"assignment to constant variable {cls.name}.{ins[2]}")
    virtual_sigs = _virtual_signatures(table) if table is not None else None
    for m in cls.methods:
        if only is not None and m.name not in only:
            continue
        _verify_method(cls, m, table, virtual_sigs)


def verify_classpath(table: dict[str, ClassDef]):
    """Strict verification of every class against the full table."""
    for cls in table.values():
        verify_class(cls, table)
