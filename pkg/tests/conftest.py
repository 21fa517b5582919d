from __future__ import annotations

import textwrap

import pytest

from patchvm.classfile import parse_class
from patchvm.vm import Budgets, VmSession


def parse(src: str):
    return parse_class(textwrap.dedent(src))


def session_for(*sources: str, step_budget: int = 200_000, alloc_budget: int = 100_000) -> VmSession:
    classes = [parse(s) for s in sources]
    return VmSession(classes, Budgets(step_budget, alloc_budget))


@pytest.fixture
def counter_class():
    return parse(
        """
        class Counter {
          static int n
          init {
            const 1
            putstatic Counter.n
            return
          }
          static fn get(0) {
            getstatic Counter.n
            returnval
          }
          static fn bump(0) {
            getstatic Counter.n
            const 1
            add
            putstatic Counter.n
            return
          }
        }
        """
    )
