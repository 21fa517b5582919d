"""Patch-pool validation in three modes: restart, vanilla, reset.

All modes run the same loop shape: take the not-yet-validated candidates,
create a session, and for each candidate swap its classes in, run the
ordered tests (originally-failing tests first), record a terminal status,
and swap the originals back. A failing test falsifies the candidate and
short-circuits to the next one; a timeout, memory error, or crash records
an error status and abandons the session, and the loop resumes the
remaining candidates on a fresh one.

Mode differences:
  * restart - a fresh session per candidate (the ground-truth oracle).
  * vanilla - one shared session, no state isolation between candidates.
  * reset   - the shared session runs the transformed classpath and
    candidates; an epoch reset runs at each candidate boundary.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum

from .classfile import ClassDef
from .errors import ConfigError, LayoutChangeError, UnknownClassError, UnknownTestError, VerifyError
from .hotswap import redefine
from .pollution import analyze
from .reset import (
    attach_epoch_runtime,
    build_epoch_runtime,
    eager_reinit_all,
    reset_epoch,
    transform,
    transform_classpath,
)
from .vm import Budgets, DEFAULT_ALLOC_BUDGET, DEFAULT_STEP_BUDGET, Verdict, VmSession


class ValidationStatus(str, Enum):
    PLAUSIBLE = "PLAUSIBLE"
    NON_PLAUSIBLE = "NON_PLAUSIBLE"
    TIMEOUT = "TIMEOUT"
    MEMORY_ERROR = "MEMORY_ERROR"
    UNKNOWN_ERROR = "UNKNOWN_ERROR"
    UNKNOWN = "UNKNOWN"


ERROR_STATUSES = frozenset(
    (ValidationStatus.TIMEOUT, ValidationStatus.MEMORY_ERROR, ValidationStatus.UNKNOWN_ERROR)
)

MODES = ("restart", "vanilla", "reset")

_VERDICT_STATUS = {
    Verdict.FAIL: ValidationStatus.NON_PLAUSIBLE,
    Verdict.TIMEOUT: ValidationStatus.TIMEOUT,
    Verdict.MEMORY_ERROR: ValidationStatus.MEMORY_ERROR,
    Verdict.VM_CRASH: ValidationStatus.UNKNOWN_ERROR,
}


@dataclass
class PatchCandidate:
    patch_id: str
    classes: list[ClassDef] = field(default_factory=list)
    error: str | None = None  # set when the candidate failed to load


@dataclass
class StatusEntry:
    status: ValidationStatus
    failing_test: str | None = None
    tests_executed: int = 0
    steps: int = 0


@dataclass
class RunConfig:
    mode: str = "restart"
    step_budget: int = DEFAULT_STEP_BUDGET
    alloc_budget: int = DEFAULT_ALLOC_BUDGET
    failing_tests: list = field(default_factory=list)
    reset_hook: str | None = None
    seed: int = 0
    audit_swaps: bool = False
    debug_eager_reinit: bool = False


@dataclass
class Telemetry:
    sessions_created: int = 0
    total_wall_ms: float = 0.0
    patch_wall_ms: dict = field(default_factory=dict)
    swap_clean: bool = True  # populated only when cfg.audit_swaps


def order_tests(all_tests: list[str], failing: list[str]) -> list[str]:
    """Originally-failing tests first, then the rest in original order."""
    known = set(all_tests)
    for t in failing:
        if t not in known:
            raise UnknownTestError(f"failing test {t!r} is not in the suite")
    failing_set = set(failing)
    return list(failing) + [t for t in all_tests if t not in failing_set]


def _run_candidate(
    session: VmSession, candidate: PatchCandidate, ordered_tests: list[str], swap_back: bool
) -> StatusEntry:
    try:
        receipts = redefine(session, candidate.classes)
    except (LayoutChangeError, UnknownClassError, VerifyError):
        return StatusEntry(ValidationStatus.UNKNOWN_ERROR)
    status = ValidationStatus.PLAUSIBLE
    failing_test = None
    executed = 0
    steps = 0
    for t in ordered_tests:
        outcome = session.run_test(t)
        executed += 1
        steps += outcome.steps_used
        if outcome.verdict is Verdict.PASS:
            continue
        status = _VERDICT_STATUS[outcome.verdict]
        failing_test = t
        break
    if swap_back and status not in ERROR_STATUSES:
        redefine(session, [r.old_def for r in receipts])
    return StatusEntry(status, failing_test, executed, steps)


def validate_pool(
    classpath: list[ClassDef],
    tests: list[str],
    pool: list[PatchCandidate],
    cfg: RunConfig,
) -> tuple[dict[str, StatusEntry], Telemetry]:
    if cfg.mode not in MODES:
        raise ConfigError(f"unknown mode {cfg.mode!r}")
    ordered = order_tests(tests, cfg.failing_tests)
    budgets = Budgets(cfg.step_budget, cfg.alloc_budget)
    telemetry = Telemetry()
    t0 = time.perf_counter()

    statuses: dict[str, StatusEntry] = {}
    for p in pool:
        if p.error is not None:
            statuses[p.patch_id] = StatusEntry(ValidationStatus.UNKNOWN_ERROR)
            telemetry.patch_wall_ms[p.patch_id] = 0.0
        else:
            statuses[p.patch_id] = StatusEntry(ValidationStatus.UNKNOWN)

    if cfg.mode == "reset":
        report = analyze(classpath)
        live_classpath = transform_classpath(classpath, report)
        runnable = [
            PatchCandidate(p.patch_id, [transform(c, report) for c in p.classes])
            for p in pool
            if p.error is None
        ]
    else:
        report = None
        live_classpath = classpath
        runnable = [p for p in pool if p.error is None]

    if cfg.mode == "restart":
        for p in runnable:
            start = time.perf_counter()
            session = VmSession(live_classpath, budgets)
            telemetry.sessions_created += 1
            statuses[p.patch_id] = _run_candidate(session, p, ordered, swap_back=False)
            telemetry.patch_wall_ms[p.patch_id] = (time.perf_counter() - start) * 1000.0
        telemetry.total_wall_ms = (time.perf_counter() - t0) * 1000.0
        return statuses, telemetry

    baseline = None
    while True:
        left = [p for p in runnable if statuses[p.patch_id].status is ValidationStatus.UNKNOWN]
        if not left:
            break
        session = VmSession(live_classpath, budgets)
        telemetry.sessions_created += 1
        if cfg.audit_swaps and baseline is None:
            baseline = session.class_table_snapshot()
        rt = None
        if cfg.mode == "reset":
            rt = build_epoch_runtime(live_classpath, report, cfg.reset_hook)
            attach_epoch_runtime(session, rt)
            reset_epoch(session, rt)
            if cfg.debug_eager_reinit:
                eager_reinit_all(session, rt)
        for p in left:
            start = time.perf_counter()
            entry = _run_candidate(session, p, ordered, swap_back=True)
            statuses[p.patch_id] = entry
            telemetry.patch_wall_ms[p.patch_id] = (time.perf_counter() - start) * 1000.0
            if entry.status in ERROR_STATUSES:
                break  # abandon this session; remaining candidates get a fresh one
            if cfg.audit_swaps and session.class_table_snapshot() != baseline:
                telemetry.swap_clean = False
            if cfg.mode == "reset":
                reset_epoch(session, rt)
                if cfg.debug_eager_reinit:
                    eager_reinit_all(session, rt)

    telemetry.total_wall_ms = (time.perf_counter() - t0) * 1000.0
    return statuses, telemetry
