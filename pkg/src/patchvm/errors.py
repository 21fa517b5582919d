"""Exception types shared across the package."""


class PatchVmError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PatchVmError):
    """Malformed classfile text. Carries 1-based line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class VerifyError(PatchVmError):
    """Structurally well-formed but semantically invalid class definition:
    unbalanced stack, unresolved label, duplicate member, bad reference."""


class LinkError(PatchVmError):
    """Classpath-level problem: missing superclass, duplicate class, cycle."""


class DeadSessionError(PatchVmError):
    """Operation attempted on a session that crashed."""


class UnknownClassError(PatchVmError):
    """Named class is not loaded in the session."""


class UnknownTestError(PatchVmError):
    """Test id does not name a static zero-parameter method of a loaded class."""


class LayoutChangeError(PatchVmError):
    """Redefinition would change the class layout (fields or method signatures)."""


class AlreadyTransformedError(PatchVmError):
    """Reset transformation applied twice to the same class."""


class ExecutionError(PatchVmError):
    """Runtime failure surfaced by a standalone VM call (outside run_test)."""


class BudgetExhaustedError(PatchVmError):
    """Step or allocation budget exhausted in a standalone VM call."""


class SessionCrashedError(PatchVmError):
    """crashvm executed during a standalone VM call; the session is now dead."""


class ConfigError(PatchVmError):
    """Invalid harness configuration."""


class PoolError(PatchVmError):
    """Patch pool problem that is attributable to a single candidate."""


class MalformedPatchError(PatchVmError):
    """A candidate's classfile failed to parse; the candidate is pre-marked."""


class DigestMismatchError(PatchVmError):
    """Two reports do not describe the same classpath/tests/pool."""


class HookError(PatchVmError):
    """The user reset hook failed; this is a harness error, not a patch status."""


class EmptyPoolWarning(UserWarning):
    """Pool directory exists but contains no candidates."""
