"""Session-based stack VM with lazy class initialization and deterministic budgets.

A VmSession owns a live class table, static storage, a heap, an init ledger,
and a string registry (the session-global analog of runtime-wide mutable
state). Execution is strictly sequential; timeouts are step budgets and
memory errors are allocation budgets, so every outcome is reproducible.

Class initialization is lazy and triggered exactly by:
  * ``new C``                      (instance creation)
  * ``invokestatic C.m``           (static method invocation)
  * ``putstatic C.f``              (static field assignment)
  * ``getstatic C.f``              (static field use, unless f is a constant
                                    variable, which never triggers)
A superclass always initializes before its subclass, and each class
initializes at most once per session.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable

from .classfile import CLINIT, ClassDef, FieldDef, MethodDef, serialize_class, verify_classpath
from .errors import (
    BudgetExhaustedError,
    DeadSessionError,
    ExecutionError,
    LinkError,
    SessionCrashedError,
    UnknownClassError,
    UnknownTestError,
)

DEFAULT_STEP_BUDGET = 200_000
DEFAULT_ALLOC_BUDGET = 100_000
MAX_CALL_DEPTH = 200

_UNSET = object()


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    TIMEOUT = "TIMEOUT"
    MEMORY_ERROR = "MEMORY_ERROR"
    VM_CRASH = "VM_CRASH"


@dataclass(frozen=True)
class Budgets:
    step_budget: int = DEFAULT_STEP_BUDGET
    alloc_budget: int = DEFAULT_ALLOC_BUDGET


@dataclass
class TestOutcome:
    verdict: Verdict
    detail: str = ""
    steps_used: int = 0
    emit_snapshot: list = field(default_factory=list)


@dataclass
class InitLedger:
    flags: dict = field(default_factory=dict)  # class name -> True once initialized
    order_trace: list = field(default_factory=list)  # initialization start order


class VmObject:
    __slots__ = ("cls", "fields", "seq")

    def __init__(self, cls: str, fields: dict, seq: int):
        self.cls = cls
        self.fields = fields
        self.seq = seq

    def __repr__(self):
        return f"<obj {self.cls}@{self.seq}>"


class VmList:
    __slots__ = ("items", "seq")

    def __init__(self, seq: int):
        self.items = []
        self.seq = seq

    def __repr__(self):
        return f"<list@{self.seq}>"


# internal control-flow exceptions; they never escape the public API
class _Fail(Exception):
    pass


class _Timeout(Exception):
    pass


class _Memory(Exception):
    pass


class _Crash(Exception):
    pass


def _truthy(v) -> bool:
    if v is None:
        return False
    if isinstance(v, (VmObject, VmList)):
        return True
    return bool(v)


def format_value(v) -> str:
    if v is None:
        return "null"
    if v is True:
        return "true"
    if v is False:
        return "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, VmObject):
        return f"{v.cls}@{v.seq}"
    if isinstance(v, VmList):
        return f"list@{v.seq}"
    return str(v) if not isinstance(v, str) else v


def default_value(ftype: str):
    return {"int": 0, "float": 0.0, "bool": False, "string": "", "ref": None}[ftype]


def _check_links(classes: dict[str, ClassDef]):
    for cls in classes.values():
        sup = cls.superclass
        if sup is not None and sup not in classes:
            raise LinkError(f"class {cls.name}: missing superclass {sup}")
    for name in classes:
        seen = set()
        cur = name
        while cur is not None:
            if cur in seen:
                raise LinkError(f"superclass cycle involving {cur}")
            seen.add(cur)
            cur = classes[cur].superclass


class VmSession:
    """A live VM. Not thread-safe; exactly one operation at a time."""

    def __init__(self, classpath: Iterable[ClassDef], budgets: Budgets | None = None):
        classes: dict[str, ClassDef] = {}
        for cls in classpath:
            if cls.name in classes:
                raise LinkError(f"duplicate class {cls.name}")
            classes[cls.name] = cls
        _check_links(classes)
        verify_classpath(classes)
        self.classes = classes
        self.budgets = budgets or Budgets()
        self.static_store: dict = {}
        self.heap: list = []
        self.ledger = InitLedger()
        self.registry: dict[str, str] = {}
        self.emit_log: list[str] = []
        self.alive = True
        self._alloc_seq = 0
        self._run_active = False
        self._steps_used = 0
        self._step_limit = 0
        self._allocs_used = 0
        self._alloc_limit = 0
        # harness attachment points (used by the reset machinery)
        self.guard_handler: Callable[[str], None] | None = None
        self.on_class_initialized: Callable[[str], None] | None = None
        self.on_trigger: Callable[[str, str], None] | None = None  # debug: (kind, class)
        self._rebuild_indexes()

    # -- indexes ------------------------------------------------------------

    def _rebuild_indexes(self):
        self._static_methods: dict[tuple[str, str], MethodDef] = {}
        self._field_defs: dict[tuple[str, str], FieldDef] = {}
        self._virtual_cache: dict[tuple[str, str], tuple[str, MethodDef]] = {}
        self._virtual_sigs: dict[str, tuple[int, bool]] = {}
        for cls in self.classes.values():
            for m in cls.methods:
                if m.kind == "static":
                    self._static_methods[(cls.name, m.name)] = m
                else:
                    self._virtual_sigs[m.name] = (m.params, m.returns_value)
            for f in cls.fields:
                self._field_defs[(cls.name, f.name)] = f

    def _resolve_virtual(self, cls_name: str, method: str):
        key = (cls_name, method)
        hit = self._virtual_cache.get(key)
        if hit is not None:
            return hit
        cur = cls_name
        while cur is not None:
            cdef = self.classes[cur]
            m = cdef.method_def(method)
            if m is not None and m.kind == "instance":
                self._virtual_cache[key] = (cur, m)
                return cur, m
            cur = cdef.superclass
        raise _Fail(f"unknown method: {method}")

    def _instance_fields(self, cls_name: str):
        # leaf-most declaration wins on a name collision along the chain
        chain = []
        cur = cls_name
        while cur is not None:
            chain.append(self.classes[cur])
            cur = self.classes[cur].superclass
        fields: dict[str, object] = {}
        for cdef in reversed(chain):
            for f in cdef.fields:
                if f.kind == "instance":
                    fields[f.name] = default_value(f.type)
        return fields

    # -- run bookkeeping ----------------------------------------------------

    def _begin_run(self, step_budget: int | None, alloc_budget: int | None):
        self._run_active = True
        self._steps_used = 0
        self._step_limit = step_budget if step_budget is not None else self.budgets.step_budget
        self._allocs_used = 0
        self._alloc_limit = alloc_budget if alloc_budget is not None else self.budgets.alloc_budget

    def _require_alive(self):
        if not self.alive:
            raise DeadSessionError("session crashed; create a new one")

    # -- public operations ----------------------------------------------------

    def ensure_initialized(self, name: str):
        """Initialize a class (superclass first) if it has not been yet."""
        self._require_alive()
        if self.ledger.flags.get(name):
            return
        if name not in self.classes:
            raise UnknownClassError(name)
        if self._run_active:
            self._initialize(name)
            return
        self._begin_run(None, None)
        try:
            self._initialize(name)
        except _Fail as e:
            raise ExecutionError(str(e)) from None
        except _Timeout:
            raise BudgetExhaustedError("step budget exhausted") from None
        except _Memory:
            raise BudgetExhaustedError("allocation budget exhausted") from None
        except _Crash:
            self.alive = False
            raise SessionCrashedError("vm crashed") from None
        finally:
            self._run_active = False

    def _initialize(self, name: str):
        if self.ledger.flags.get(name):
            return
        cdef = self.classes[name]
        if cdef.superclass is not None:
            self._initialize(cdef.superclass)
        # flag before the body runs: a re-entrant trigger from the
        # initializer itself must not recurse
        self.ledger.flags[name] = True
        self.ledger.order_trace.append(name)
        if self.on_class_initialized is not None:
            self.on_class_initialized(name)
        for f in cdef.fields:
            if f.kind == "static" and f.constant_value is None:
                self.static_store[(name, f.name)] = default_value(f.type)
        clinit = self._static_methods.get((name, CLINIT))
        if clinit is not None:
            self._invoke(name, clinit, [], 0)

    def run_test(self, test_id: str, step_budget: int | None = None, alloc_budget: int | None = None) -> TestOutcome:
        """Run one static zero-parameter method as a test."""
        self._require_alive()
        cls_name, method = self._resolve_test(test_id)
        self._begin_run(step_budget, alloc_budget)
        emit_start = len(self.emit_log)
        verdict = Verdict.PASS
        detail = ""
        try:
            self._initialize(cls_name)
            self._invoke(cls_name, self._static_methods[(cls_name, method)], [], 0)
        except _Fail as e:
            verdict, detail = Verdict.FAIL, str(e)
        except _Timeout:
            verdict, detail = Verdict.TIMEOUT, "step budget exhausted"
        except _Memory:
            verdict, detail = Verdict.MEMORY_ERROR, "allocation budget exhausted"
        except _Crash:
            self.alive = False
            verdict, detail = Verdict.VM_CRASH, "vm crashed"
        finally:
            self._run_active = False
        return TestOutcome(verdict, detail, self._steps_used, self.emit_log[emit_start:])

    def _resolve_test(self, test_id: str):
        cls_name, dot, method = test_id.partition(".")
        if not dot or not cls_name or not method:
            raise UnknownTestError(f"bad test id {test_id!r} (expected Class.method)")
        if cls_name not in self.classes:
            raise UnknownTestError(f"unknown test class {cls_name!r}")
        m = self._static_methods.get((cls_name, method))
        if m is None or m.params != 0:
            raise UnknownTestError(f"test {test_id!r} must be a static zero-parameter method")
        return cls_name, method

    def invoke_static(self, cls_name: str, method: str, args: tuple = ()):
        """Invoke a static method. Nested inside an active run it shares that
        run's budgets; standalone it gets fresh session budgets."""
        self._require_alive()
        m = self._static_methods.get((cls_name, method))
        if m is None:
            raise UnknownTestError(f"unknown static method {cls_name}.{method}")
        if self._run_active:
            self._initialize(cls_name)
            return self._invoke(cls_name, m, list(args), 0)
        self._begin_run(None, None)
        try:
            self._initialize(cls_name)
            return self._invoke(cls_name, m, list(args), 0)
        except _Fail as e:
            raise ExecutionError(str(e)) from None
        except _Timeout:
            raise BudgetExhaustedError("step budget exhausted") from None
        except _Memory:
            raise BudgetExhaustedError("allocation budget exhausted") from None
        except _Crash:
            self.alive = False
            raise SessionCrashedError("vm crashed") from None
        finally:
            self._run_active = False

    def class_table_snapshot(self) -> tuple:
        """Structural snapshot of the live class table (for swap-hygiene checks)."""
        return tuple(sorted((name, serialize_class(c)) for name, c in self.classes.items()))

    def state_snapshot(self) -> tuple:
        """Observable non-heap state: statics, ledger, registry."""
        statics = tuple(sorted((k, format_value(v)) for k, v in self.static_store.items()))
        return (statics, tuple(self.ledger.order_trace), tuple(sorted(self.registry.items())))

    # -- interpreter ----------------------------------------------------------

    def _alloc(self):
        if self._allocs_used >= self._alloc_limit:
            raise _Memory()
        self._allocs_used += 1
        self._alloc_seq += 1
        return self._alloc_seq

    def _invoke(self, cls_name: str, m: MethodDef, args: list, depth: int):
        if depth > MAX_CALL_DEPTH:
            raise _Fail("call depth exceeded")
        loc: dict[int, object] = {}
        for idx, a in enumerate(args):
            loc[idx] = a
        body = m.body
        labels = m.labels
        n = len(body)
        stack: list = []
        ledger_flags = self.ledger.flags
        i = 0
        while i < n:
            if self._steps_used >= self._step_limit:
                raise _Timeout()
            self._steps_used += 1
            ins = body[i]
            op = ins[0]

            if op == "const":
                stack.append(ins[1])
            elif op == "load":
                v = loc.get(ins[1], _UNSET)
                if v is _UNSET:
                    raise _Fail(f"unset local: {ins[1]}")
                stack.append(v)
            elif op == "store":
                loc[ins[1]] = stack.pop()
            elif op == "getstatic":
                c, f = ins[1], ins[2]
                fdef = self._field_defs[(c, f)]
                if fdef.constant_value is not None:
                    stack.append(fdef.constant_value)
                else:
                    if not ledger_flags.get(c):
                        if self.on_trigger is not None:
                            self.on_trigger("getstatic", c)
                        self._initialize(c)
                    stack.append(self.static_store[(c, f)])
            elif op == "putstatic":
                c, f = ins[1], ins[2]
                v = stack.pop()
                if not ledger_flags.get(c):
                    if self.on_trigger is not None:
                        self.on_trigger("putstatic", c)
                    self._initialize(c)
                self.static_store[(c, f)] = v
            elif op == "add":
                b = stack.pop()
                a = stack.pop()
                if isinstance(a, str) and isinstance(b, str):
                    stack.append(a + b)
                elif isinstance(a, (int, float)) and isinstance(b, (int, float)):
                    stack.append(a + b)
                else:
                    raise _Fail("type error: add")
            elif op == "sub":
                b = stack.pop()
                a = stack.pop()
                if not (isinstance(a, (int, float)) and isinstance(b, (int, float))):
                    raise _Fail("type error: sub")
                stack.append(a - b)
            elif op == "mul":
                b = stack.pop()
                a = stack.pop()
                if not (isinstance(a, (int, float)) and isinstance(b, (int, float))):
                    raise _Fail("type error: mul")
                stack.append(a * b)
            elif op == "div":
                b = stack.pop()
                a = stack.pop()
                if not (isinstance(a, (int, float)) and isinstance(b, (int, float))):
                    raise _Fail("type error: div")
                if b == 0:
                    raise _Fail("division by zero")
                if isinstance(a, float) or isinstance(b, float):
                    stack.append(a / b)
                else:
                    stack.append(a // b)
            elif op == "neg":
                a = stack.pop()
                if not isinstance(a, (int, float)):
                    raise _Fail("type error: neg")
                stack.append(-a)
            elif op == "eq":
                b = stack.pop()
                a = stack.pop()
                if isinstance(a, (VmObject, VmList)) or isinstance(b, (VmObject, VmList)):
                    stack.append(a is b)
                else:
                    stack.append(a == b)
            elif op == "lt" or op == "le":
                b = stack.pop()
                a = stack.pop()
                ok = (isinstance(a, (int, float)) and isinstance(b, (int, float))) or (
                    isinstance(a, str) and isinstance(b, str)
                )
                if not ok:
                    raise _Fail(f"type error: {op}")
                stack.append(a < b if op == "lt" else a <= b)
            elif op == "not":
                stack.append(not _truthy(stack.pop()))
            elif op == "label":
                pass
            elif op == "jump":
                i = labels[ins[1]]
                continue
            elif op == "jumpif":
                if _truthy(stack.pop()):
                    i = labels[ins[1]]
                    continue
            elif op == "invokestatic":
                c, mn = ins[1], ins[2]
                if not ledger_flags.get(c):
                    if self.on_trigger is not None:
                        self.on_trigger("invokestatic", c)
                    self._initialize(c)
                callee = self._static_methods.get((c, mn))
                if callee is None:
                    raise _Fail(f"unknown method: {c}.{mn}")
                argc = callee.params
                callee_args = [stack.pop() for _ in range(argc)]
                callee_args.reverse()
                rv = self._invoke(c, callee, callee_args, depth + 1)
                if callee.returns_value:
                    stack.append(rv)
            elif op == "invokevirtual":
                mn = ins[1]
                sig = self._virtual_sigs.get(mn)
                if sig is None:
                    raise _Fail(f"unknown method: {mn}")
                argc = sig[0]
                callee_args = [stack.pop() for _ in range(argc)]
                callee_args.reverse()
                recv = stack.pop()
                if recv is None:
                    raise _Fail("null reference")
                if not isinstance(recv, VmObject):
                    raise _Fail("type error: invokevirtual")
                owner, callee = self._resolve_virtual(recv.cls, mn)
                rv = self._invoke(owner, callee, [recv] + callee_args, depth + 1)
                if callee.returns_value:
                    stack.append(rv)
            elif op == "new":
                c = ins[1]
                if not ledger_flags.get(c):
                    if self.on_trigger is not None:
                        self.on_trigger("new", c)
                    self._initialize(c)
                obj = VmObject(c, self._instance_fields(c), self._alloc())
                self.heap.append(obj)
                stack.append(obj)
            elif op == "getfield":
                obj = stack.pop()
                if obj is None:
                    raise _Fail("null reference")
                if not isinstance(obj, VmObject):
                    raise _Fail("type error: getfield")
                if ins[1] not in obj.fields:
                    raise _Fail(f"unknown field: {ins[1]}")
                stack.append(obj.fields[ins[1]])
            elif op == "putfield":
                v = stack.pop()
                obj = stack.pop()
                if obj is None:
                    raise _Fail("null reference")
                if not isinstance(obj, VmObject):
                    raise _Fail("type error: putfield")
                if ins[1] not in obj.fields:
                    raise _Fail(f"unknown field: {ins[1]}")
                obj.fields[ins[1]] = v
            elif op == "listnew":
                lst = VmList(self._alloc())
                self.heap.append(lst)
                stack.append(lst)
            elif op == "listget":
                idx = stack.pop()
                lst = stack.pop()
                if not isinstance(lst, VmList) or not isinstance(idx, int):
                    raise _Fail("type error: listget")
                if not 0 <= idx < len(lst.items):
                    raise _Fail("list index out of range")
                stack.append(lst.items[idx])
            elif op == "listput":
                v = stack.pop()
                idx = stack.pop()
                lst = stack.pop()
                if not isinstance(lst, VmList) or not isinstance(idx, int):
                    raise _Fail("type error: listput")
                if 0 <= idx < len(lst.items):
                    lst.items[idx] = v
                elif idx == len(lst.items):
                    lst.items.append(v)
                else:
                    raise _Fail("list index out of range")
            elif op == "listlen":
                lst = stack.pop()
                if not isinstance(lst, VmList):
                    raise _Fail("type error: listlen")
                stack.append(len(lst.items))
            elif op == "sysset":
                v = stack.pop()
                k = stack.pop()
                if not isinstance(k, str) or not isinstance(v, str):
                    raise _Fail("type error: sysset")
                self.registry[k] = v
            elif op == "sysget":
                k = stack.pop()
                if not isinstance(k, str):
                    raise _Fail("type error: sysget")
                stack.append(self.registry.get(k, ""))
            elif op == "emit":
                self.emit_log.append(format_value(stack.pop()))
            elif op == "assert":
                if not _truthy(stack.pop()):
                    raise _Fail("assertion failed")
            elif op == "throw":
                raise _Fail(f"throw: {ins[1]}")
            elif op == "return":
                return None
            elif op == "returnval":
                return stack.pop()
            elif op == "guard":
                if self.guard_handler is not None:
                    self.guard_handler(ins[1])
            elif op == "crashvm":
                raise _Crash()
            else:  # pragma: no cover - instruction set is closed
                raise AssertionError(op)
            i += 1
        return None


def create_session(classpath: Iterable[ClassDef], budgets: Budgets | None = None) -> VmSession:
    return VmSession(classpath, budgets)


def run_suite(session: VmSession, tests: Iterable[str]) -> list[TestOutcome]:
    """Run tests in order on one session; stops early only if the session dies."""
    outcomes = []
    for t in tests:
        outcomes.append(session.run_test(t))
        if not session.alive:
            break
    return outcomes


def wall_ms() -> float:
    return time.perf_counter() * 1000.0
