"""In-place class redefinition: replace method bodies in a live session.

A redefinition may only change method bodies. Layout (fields, method
signatures, the superclass link) must be identical, mirroring the usual
hot-swap restriction. Multi-class redefinitions are atomic: either every
class passes the layout and verification checks or nothing changes.

Unlike stock hot swap, replacing an initializer body is allowed; the caveat
is that an already-initialized class will not re-run it within the same
session (the reset machinery exists precisely to lift that caveat).
"""

from __future__ import annotations

from dataclasses import dataclass

from .classfile import ClassDef, layout_signature, verify_class, verify_classpath
from .errors import DeadSessionError, LayoutChangeError, UnknownClassError, VerifyError
from .vm import VmSession


@dataclass
class SwapReceipt:
    class_name: str
    old_def: ClassDef


def redefine(session: VmSession, new_defs: list[ClassDef]) -> list[SwapReceipt]:
    """Swap in new definitions; returns receipts holding the displaced ones."""
    if not session.alive:
        raise DeadSessionError("session crashed; create a new one")
    seen: set[str] = set()
    prospective = dict(session.classes)
    receipts: list[SwapReceipt] = []
    return_kinds_preserved = True
    for nd in new_defs:
        if nd.name in seen:
            raise VerifyError(f"duplicate class {nd.name} in redefinition")
        seen.add(nd.name)
        old = session.classes.get(nd.name)
        if old is None:
            raise UnknownClassError(nd.name)
        if layout_signature(old) != layout_signature(nd):
            raise LayoutChangeError(f"redefinition of {nd.name} changes the class layout")
        for om, nm in zip(old.methods, nd.methods):
            if om.returns_value != nm.returns_value:
                return_kinds_preserved = False
        prospective[nd.name] = nd
        receipts.append(SwapReceipt(nd.name, old))
    if return_kinds_preserved:
        # other classes' stack effects depend only on signatures and return
        # kinds, both unchanged: verifying the replaced bodies suffices
        for nd, receipt in zip(new_defs, receipts):
            changed = {
                nm.name
                for om, nm in zip(receipt.old_def.methods, nd.methods)
                if om.body != nm.body
            }
            verify_class(nd, prospective, only=changed)
    else:
        verify_classpath(prospective)
    session.classes.update((r.class_name, nd) for r, nd in zip(receipts, new_defs))
    session._rebuild_indexes()
    return receipts
