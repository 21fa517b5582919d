"""Machine-readable run reports, pool/manifest loading, and mode comparison.

Report schema (``patchvm-report/1``): a canonical JSON document with sorted
keys, two-space indentation, and a trailing newline. All fields except the
wall-clock ones are byte-identical across repeated runs with the same
config. An optional flat CSV carries one row per candidate.

The classpath digest covers the classfile texts, the test manifest, and the
full pool content, all pre-transformation, so reports from different modes
over the same inputs share a digest and can be compared.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
import statistics
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from .classfile import ClassDef, parse_class, serialize_class
from .errors import ConfigError, DigestMismatchError, EmptyPoolWarning, PatchVmError
from .pollution import PollutionReport
from .validator import PatchCandidate, RunConfig, StatusEntry, Telemetry, ValidationStatus

REPORT_SCHEMA = "patchvm-report/1"


# ---------------------------------------------------------------------------
# Input loading


def load_classpath(directory: str | Path) -> list[ClassDef]:
    """Parse every .cls file in a directory, sorted by filename."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError(f"classpath directory not found: {directory}")
    classes = []
    for path in sorted(directory.glob("*.cls")):
        classes.append(parse_class(path.read_text(encoding="utf-8")))
    if not classes:
        raise ConfigError(f"no .cls files in {directory}")
    return classes


def parse_manifest(text: str) -> tuple[list[str], list[str]]:
    """Test manifest: one test id per line, '#' comments, 'failing:' prefix
    marks originally-failing tests (which are part of the suite)."""
    tests: list[str] = []
    failing: list[str] = []
    for raw in text.split("\n"):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("failing:"):
            tid = line[len("failing:"):].strip()
            failing.append(tid)
            tests.append(tid)
        else:
            tests.append(line)
    return tests, failing


def load_manifest(path: str | Path) -> tuple[list[str], list[str]]:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"test manifest not found: {path}")
    return parse_manifest(path.read_text(encoding="utf-8"))


def load_patch_pool(directory: str | Path) -> list[PatchCandidate]:
    """One candidate per immediate subdirectory, sorted lexicographically;
    every .cls file inside is one replacement class. A candidate whose
    classfiles fail to parse is kept, pre-marked as erroneous."""
    directory = Path(directory)
    if not directory.is_dir():
        raise ConfigError(f"pool directory not found: {directory}")
    candidates: list[PatchCandidate] = []
    for sub in sorted(p for p in directory.iterdir() if p.is_dir()):
        classes: list[ClassDef] = []
        error = None
        names: set[str] = set()
        for path in sorted(sub.glob("*.cls")):
            try:
                cls = parse_class(path.read_text(encoding="utf-8"))
            except PatchVmError as e:
                error = f"{path.name}: {e}"
                break
            if cls.name in names:
                error = f"{path.name}: duplicate class {cls.name}"
                break
            names.add(cls.name)
            classes.append(cls)
        else:
            if not classes:
                error = "no .cls files"
        if error is not None:
            candidates.append(PatchCandidate(sub.name, [], error))
        else:
            candidates.append(PatchCandidate(sub.name, classes))
    if not candidates:
        warnings.warn(f"patch pool {directory} is empty", EmptyPoolWarning)
    return candidates


# ---------------------------------------------------------------------------
# Digest


def classpath_digest(classpath: list[ClassDef], tests: list[str], pool: list[PatchCandidate]) -> str:
    h = hashlib.sha256()
    for c in sorted(classpath, key=lambda c: c.name):
        h.update(serialize_class(c).encode("utf-8"))
        h.update(b"\x00")
    h.update("\n".join(tests).encode("utf-8"))
    h.update(b"\x01")
    for p in pool:
        h.update(p.patch_id.encode("utf-8"))
        h.update(b"\x02")
        if p.error is not None:
            h.update(b"<malformed>")
        for c in sorted(p.classes, key=lambda c: c.name):
            h.update(serialize_class(c).encode("utf-8"))
            h.update(b"\x03")
    return h.hexdigest()


# ---------------------------------------------------------------------------
# Report document


@dataclass
class PatchRecord:
    id: str
    status: str
    failing_test: str | None
    tests_executed: int
    steps: int
    wall_ms: float


@dataclass
class RunReport:
    config: dict
    digest: str
    patches: list[PatchRecord]
    totals: dict
    pollution: list[dict]
    schema: str = REPORT_SCHEMA

    def statuses(self) -> dict[str, str]:
        return {p.id: p.status for p in self.patches}


def build_report(
    cfg: RunConfig,
    digest: str,
    statuses: dict[str, StatusEntry],
    telemetry: Telemetry,
    pollution: PollutionReport,
) -> RunReport:
    patches = [
        PatchRecord(
            pid,
            entry.status.value,
            entry.failing_test,
            entry.tests_executed,
            entry.steps,
            round(telemetry.patch_wall_ms.get(pid, 0.0), 3),
        )
        for pid, entry in statuses.items()
    ]
    config = {
        "mode": cfg.mode,
        "step_budget": cfg.step_budget,
        "alloc_budget": cfg.alloc_budget,
        "failing_tests": list(cfg.failing_tests),
        "reset_hook": cfg.reset_hook,
        "seed": cfg.seed,
    }
    totals = {
        "wall_ms": round(telemetry.total_wall_ms, 3),
        "sessions_created": telemetry.sessions_created,
    }
    return RunReport(config, digest, patches, totals, pollution.rows())


def report_to_json(report: RunReport) -> str:
    doc = {
        "schema": report.schema,
        "config": report.config,
        "digest": report.digest,
        "patches": [
            {
                "id": p.id,
                "status": p.status,
                "failing_test": p.failing_test,
                "tests_executed": p.tests_executed,
                "steps": p.steps,
                "wall_ms": p.wall_ms,
            }
            for p in report.patches
        ],
        "totals": report.totals,
        "pollution": report.pollution,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> RunReport:
    doc = json.loads(text)
    if doc.get("schema") != REPORT_SCHEMA:
        raise ConfigError(f"unsupported report schema {doc.get('schema')!r}")
    patches = [
        PatchRecord(
            p["id"], p["status"], p["failing_test"], p["tests_executed"], p["steps"], p["wall_ms"]
        )
        for p in doc["patches"]
    ]
    return RunReport(doc["config"], doc["digest"], patches, doc["totals"], doc["pollution"])


def atomic_write(path: str | Path, content: str):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(content, encoding="utf-8")
    os.replace(tmp, path)


def save_report(report: RunReport, path: str | Path):
    atomic_write(path, report_to_json(report))


def load_report(path: str | Path) -> RunReport:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"report not found: {path}")
    return report_from_json(path.read_text(encoding="utf-8"))


def write_csv(report: RunReport, path: str | Path):
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "status", "failing_test", "tests_executed", "steps", "wall_ms"])
        for p in report.patches:
            writer.writerow(
                [p.id, p.status, p.failing_test or "", p.tests_executed, p.steps, p.wall_ms]
            )
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Comparison and timing


@dataclass
class DivergenceReport:
    entries: list  # (patch id, status in a, status in b)
    mismatch_count: int
    total: int

    @property
    def ratio(self) -> float:
        return self.mismatch_count / self.total if self.total else 0.0

    @property
    def ratio_percent(self) -> str:
        return f"{self.ratio * 100:.2f}%"


def divergence(mismatch_count: int, total: int, entries: list | None = None) -> DivergenceReport:
    return DivergenceReport(entries or [], mismatch_count, total)


def compare_reports(a: RunReport, b: RunReport) -> DivergenceReport:
    if a.digest != b.digest:
        raise DigestMismatchError("reports describe different inputs")
    b_status = b.statuses()
    entries = []
    for p in a.patches:
        other = b_status.get(p.id)
        if other != p.status:
            entries.append((p.id, p.status, other))
    return DivergenceReport(entries, len(entries), len(a.patches))


def speedup_value(a_total_ms: float, b_total_ms: float) -> float:
    if b_total_ms <= 0:
        raise ConfigError("cannot compute a speedup against zero time")
    return a_total_ms / b_total_ms


def timing_summary(a: RunReport, b: RunReport) -> dict:
    """Speedup of b relative to a (a.total / b.total), with per-patch medians."""
    if a.digest != b.digest:
        raise DigestMismatchError("reports describe different inputs")
    a_walls = [p.wall_ms for p in a.patches]
    b_walls = [p.wall_ms for p in b.patches]
    return {
        "speedup": speedup_value(a.totals["wall_ms"], b.totals["wall_ms"]),
        "a_total_ms": a.totals["wall_ms"],
        "b_total_ms": b.totals["wall_ms"],
        "a_median_ms": statistics.median(a_walls) if a_walls else 0.0,
        "b_median_ms": statistics.median(b_walls) if b_walls else 0.0,
    }


def normalized_report_text(report: RunReport) -> str:
    """Report JSON with wall-clock fields zeroed; used for determinism checks
    and for committed expected-output files."""
    clone = RunReport(
        dict(report.config),
        report.digest,
        [PatchRecord(p.id, p.status, p.failing_test, p.tests_executed, p.steps, 0.0) for p in report.patches],
        {**report.totals, "wall_ms": 0.0},
        [dict(r) for r in report.pollution],
        report.schema,
    )
    return report_to_json(clone)
