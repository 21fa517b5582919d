"""patchvm: a miniature VM plus a patch-validation harness.

Validates candidate-patch pools against a test suite in three modes: a
fresh session per patch (the oracle), a shared session (fast but exposed to
cross-patch state pollution), and a shared session with epoch reset (fast
and pollution-free).
"""

from .classfile import (
    ClassDef,
    FieldDef,
    LayoutSignature,
    MethodDef,
    layout_signature,
    make_method,
    parse_class,
    serialize_class,
)
from .hotswap import SwapReceipt, redefine
from .pollution import PollutionReport, Reason, analyze
from .reset import (
    EpochRuntime,
    attach_epoch_runtime,
    build_epoch_runtime,
    ensure_reinit,
    reset_epoch,
    transform,
    transform_classpath,
)
from .validator import (
    PatchCandidate,
    RunConfig,
    StatusEntry,
    ValidationStatus,
    order_tests,
    validate_pool,
)
from .vm import Budgets, TestOutcome, Verdict, VmSession, create_session

__all__ = [
    "Budgets",
    "ClassDef",
    "EpochRuntime",
    "FieldDef",
    "LayoutSignature",
    "MethodDef",
    "PatchCandidate",
    "PollutionReport",
    "Reason",
    "RunConfig",
    "StatusEntry",
    "SwapReceipt",
    "TestOutcome",
    "ValidationStatus",
    "Verdict",
    "VmSession",
    "analyze",
    "attach_epoch_runtime",
    "build_epoch_runtime",
    "create_session",
    "ensure_reinit",
    "layout_signature",
    "make_method",
    "order_tests",
    "parse_class",
    "redefine",
    "reset_epoch",
    "serialize_class",
    "transform",
    "transform_classpath",
    "validate_pool",
]
