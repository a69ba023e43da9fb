"""Exception hierarchy shared by the library and the CLI exit-code map."""


class SyzMirrorError(Exception):
    """Base class for all library errors."""


class InputError(SyzMirrorError):
    """Malformed input document or unparseable literal (CLI exit 4)."""


class MathDomainError(SyzMirrorError):
    """A mathematical precondition failed (CLI exit 3)."""


class ValidationError(MathDomainError):
    """Input data failed its validation report (CLI exit 2)."""


class FrameMismatch(MathDomainError):
    """Operands live over different frames."""


class NonUnitSeries(MathDomainError):
    """Constant term violates a unit/zero-constant precondition."""


class TruncationExceeded(MathDomainError):
    """A coefficient beyond the computed truncation order was requested."""


class FixedPointDivergence(MathDomainError):
    """A graded fixed-point system failed to stabilize."""


class BranchError(MathDomainError):
    """No admissible grade-0 root or sign normalization exists."""


class FrameEscape(MathDomainError):
    """A monomial left the declared frame monoid (wrong frame or phase)."""

    def __init__(self, message, offenders=()):
        super().__init__(message)
        self.offenders = tuple(offenders)
