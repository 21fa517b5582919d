"""Static analysis flagging classes whose static state can leak across patches.

A field is a pollution site iff it is
  * static and not final (MUTABLE_STATIC), or
  * static, final, and of reference type (FINAL_REFERENCE): the reference
    cannot be reassigned but the object behind it can be mutated.
Constant variables are never flagged. Instance fields are never flagged:
they are only reachable through roots that are themselves static or
test-local, and test-local roots die with the test.

The session registry is not part of the report; it is treated as always
polluted and reset unconditionally between epochs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .classfile import ClassDef


class Reason(str, Enum):
    MUTABLE_STATIC = "MUTABLE_STATIC"
    FINAL_REFERENCE = "FINAL_REFERENCE"


@dataclass
class PollutionReport:
    flagged_classes: set = field(default_factory=set)
    flagged_fields: set = field(default_factory=set)  # (class, field)
    reasons: dict = field(default_factory=dict)  # (class, field) -> Reason
    constant_fields: set = field(default_factory=set)  # (class, field)

    def is_flagged_class(self, name: str) -> bool:
        return name in self.flagged_classes

    def rows(self) -> list[dict]:
        return [
            {"class": c, "field": f, "reason": self.reasons[(c, f)].value}
            for c, f in sorted(self.flagged_fields)
        ]


def analyze(classpath: Iterable[ClassDef]) -> PollutionReport:
    report = PollutionReport()
    for cls in classpath:
        for f in cls.fields:
            if f.kind != "static":
                continue
            if f.constant_value is not None:
                report.constant_fields.add((cls.name, f.name))
                continue
            if not f.is_final:
                reason = Reason.MUTABLE_STATIC
            elif f.type == "ref":
                reason = Reason.FINAL_REFERENCE
            else:
                continue
            report.flagged_classes.add(cls.name)
            report.flagged_fields.add((cls.name, f.name))
            report.reasons[(cls.name, f.name)] = reason
    return report
