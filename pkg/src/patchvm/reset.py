"""Epoch reset: make class initializers re-runnable without VM privileges.

Three cooperating pieces, all at application level:

1. ``transform`` rewrites a class so its initializer body lives in an
   ordinary static method (``uniapr_clinit``); the initializer that remains
   only delegates to it. Final modifiers on flagged fields are dropped so
   re-running the body can reassign them, and a ``guard C`` instruction is
   inserted immediately before every initialization-trigger instruction on a
   flagged class.

2. ``ensure_reinit`` is what a ``guard`` executes when an EpochRuntime is
   attached: at most once per epoch it restores the class's static fields to
   their declared defaults and re-runs ``uniapr_clinit``, superclass first.
   Dependencies re-initialize in trigger order because the renamed
   initializer bodies carry guards of their own.

3. ``reset_epoch`` runs between patches: it clears the per-epoch flag table
   and the session registry, then invokes the optional user hook.

A session with no EpochRuntime attached executes ``guard`` as a no-op, so a
transformed program is observationally identical to the original for
single-epoch runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classfile import CLINIT, REINIT_METHOD, ClassDef, FieldDef, MethodDef, make_method

def _renamed_method(m: MethodDef, name: str) -> MethodDef:
    # same body: label index and return kind carry over unchanged
    clone = MethodDef(name, m.kind, m.params, m.body)
    object.__setattr__(clone, "labels", m.labels)
    object.__setattr__(clone, "returns_value", m.returns_value)
    return clone
from .errors import (
    AlreadyTransformedError,
    BudgetExhaustedError,
    ConfigError,
    DeadSessionError,
    ExecutionError,
    HookError,
    SessionCrashedError,
)
from .pollution import PollutionReport
from .vm import VmSession, default_value


@dataclass
class EpochRuntime:
    """Per-epoch reinitialization state for one session.

    The flag table is a flat list indexed by a class ordinal assigned when
    the runtime is built over the transformed classpath; ``reinit_flags``
    exposes the conventional mapping view.
    """

    ordinal: dict[str, int]
    flags: list[bool]
    custom_hook: str | None = None
    reinit_trace: list[str] = field(default_factory=list)

    @property
    def reinit_flags(self) -> dict[str, bool]:
        return {name: self.flags[i] for name, i in self.ordinal.items()}


# ---------------------------------------------------------------------------
# Phase 2: bytecode transformation


def _needs_guard(ins, report: PollutionReport) -> bool:
    op = ins[0]
    if op in ("new", "invokestatic", "putstatic"):
        return ins[1] in report.flagged_classes
    if op == "getstatic":
        return ins[1] in report.flagged_classes and (ins[1], ins[2]) not in report.constant_fields
    return False


def _guarded_body(body, report: PollutionReport):
    """Insert guards; returns the original tuple when nothing needs one."""
    if not report.flagged_classes or not any(_needs_guard(ins, report) for ins in body):
        return body
    out = []
    for ins in body:
        if _needs_guard(ins, report):
            out.append(("guard", ins[1]))
        out.append(ins)
    return tuple(out)


def transform(c: ClassDef, report: PollutionReport) -> ClassDef:
    """Rewrite one class for epoch reset. Raises if already transformed."""
    if c.method_def(REINIT_METHOD) is not None or any(
        ins[0] == "guard" for m in c.methods for ins in m.body
    ):
        raise AlreadyTransformedError(c.name)

    fields = [
        FieldDef(f.name, f.kind, f.type, False, f.constant_value)
        if (c.name, f.name) in report.flagged_fields and f.is_final
        else f
        for f in c.fields
    ]

    methods: list[MethodDef] = []
    reinit: MethodDef | None = None
    for m in c.methods:
        if m.name == CLINIT:
            guarded = _guarded_body(m.body, report)
            if guarded is m.body:
                reinit = _renamed_method(m, REINIT_METHOD)
            else:
                reinit = make_method(REINIT_METHOD, "static", 0, guarded)
            delegate = (("invokestatic", c.name, REINIT_METHOD), ("return",))
            methods.append(make_method(CLINIT, "static", 0, _guarded_body(delegate, report)))
        else:
            body = _guarded_body(m.body, report)
            methods.append(m if body is m.body else make_method(m.name, m.kind, m.params, body))
    if reinit is not None:
        methods.append(reinit)

    return ClassDef(c.name, c.superclass, fields, methods)


def transform_classpath(classpath, report: PollutionReport) -> list[ClassDef]:
    return [transform(c, report) for c in classpath]


def build_epoch_runtime(
    transformed_classpath, report: PollutionReport, custom_hook: str | None = None
) -> EpochRuntime:
    """Assign ordinals to flagged classes in classpath order."""
    ordinal: dict[str, int] = {}
    for c in transformed_classpath:
        if c.name in report.flagged_classes:
            ordinal[c.name] = len(ordinal)
    return EpochRuntime(ordinal, [False] * len(ordinal), custom_hook)


# ---------------------------------------------------------------------------
# Phase 3: dynamic state reset


def attach_epoch_runtime(session: VmSession, rt: EpochRuntime):
    """Wire the runtime into a session: guards call ensure_reinit, and a real
    initialization marks its class epoch-fresh so it is not redundantly
    re-initialized within the same epoch."""
    if rt.custom_hook is not None:
        _resolve_hook(session, rt.custom_hook)

    def _on_initialized(name: str):
        idx = rt.ordinal.get(name)
        if idx is not None:
            rt.flags[idx] = True
        if session.classes[name].method_def(REINIT_METHOD) is not None:
            rt.reinit_trace.append(name)

    session.guard_handler = lambda name: ensure_reinit(session, rt, name)
    session.on_class_initialized = _on_initialized


def _resolve_hook(session: VmSession, hook: str) -> tuple[str, str]:
    cls_name, dot, method = hook.partition(".")
    if not dot:
        raise ConfigError(f"bad reset hook {hook!r} (expected Class.method)")
    cdef = session.classes.get(cls_name)
    m = cdef.method_def(method) if cdef is not None else None
    if m is None or m.kind != "static" or m.params != 0:
        raise ConfigError(f"reset hook {hook!r} must name a static zero-parameter method")
    return cls_name, method


def ensure_reinit(session: VmSession, rt: EpochRuntime, name: str):
    """Bring one flagged class up to date for the current epoch, at most once."""
    idx = rt.ordinal.get(name)
    if idx is None:
        return
    if rt.flags[idx]:
        return
    if not session.ledger.flags.get(name):
        # never initialized in this session: ordinary lazy initialization
        # applies (and marks the epoch flag through the attach hook)
        session.ensure_initialized(name)
        return
    rt.flags[idx] = True
    cdef = session.classes[name]
    sup = cdef.superclass
    if sup is not None and sup in rt.ordinal and session.ledger.flags.get(sup):
        ensure_reinit(session, rt, sup)
    for f in cdef.fields:
        if f.kind == "static" and f.constant_value is None:
            session.static_store[(name, f.name)] = default_value(f.type)
    if cdef.method_def(REINIT_METHOD) is not None:
        rt.reinit_trace.append(name)
        session.invoke_static(name, REINIT_METHOD)


def reset_epoch(session: VmSession, rt: EpochRuntime):
    """Epoch boundary: clear reinit flags and the registry, then run the hook."""
    if not session.alive:
        raise DeadSessionError("session crashed; create a new one")
    for i in range(len(rt.flags)):
        rt.flags[i] = False
    rt.reinit_trace.clear()
    session.registry.clear()
    if rt.custom_hook is not None:
        cls_name, method = _resolve_hook(session, rt.custom_hook)
        try:
            session.invoke_static(cls_name, method)
        except (ExecutionError, BudgetExhaustedError, SessionCrashedError) as e:
            raise HookError(f"reset hook {rt.custom_hook} failed: {e}") from e


def eager_reinit_all(session: VmSession, rt: EpochRuntime):
    """Debug-only: re-run every flagged class's initializer immediately, in
    sorted-name order with guards suspended. This is the naive replay that
    ignores trigger order; it exists to demonstrate why trigger-order
    reinitialization matters and is excluded from normal validation paths."""
    saved = session.guard_handler
    session.guard_handler = None
    try:
        for name in sorted(rt.ordinal):
            idx = rt.ordinal[name]
            if rt.flags[idx] or not session.ledger.flags.get(name):
                continue
            rt.flags[idx] = True
            cdef = session.classes[name]
            for f in cdef.fields:
                if f.kind == "static" and f.constant_value is None:
                    session.static_store[(name, f.name)] = default_value(f.type)
            if cdef.method_def(REINIT_METHOD) is not None:
                rt.reinit_trace.append(name)
                session.invoke_static(name, REINIT_METHOD)
    finally:
        session.guard_handler = saved
