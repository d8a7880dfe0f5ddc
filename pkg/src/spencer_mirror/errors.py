"""Exception taxonomy shared across the toolkit.

The CLI maps these onto its exit-code contract: InputError/CapacityError are
caller mistakes (exit 1 when raised from config handling), VerificationFailure
is a failed mirror/claim check (exit 2), and ConsistencyError/NumericError are
numerical breakdowns (exit 3).
"""


class SpencerMirrorError(Exception):
    """Base class for all toolkit errors."""


class InputError(SpencerMirrorError, ValueError):
    """Malformed or mutually inconsistent inputs (dimension mismatch, bad data)."""


class CapacityError(SpencerMirrorError, ValueError):
    """Request outside the supported degree/truncation range."""


class AssemblyError(SpencerMirrorError, RuntimeError):
    """Matrix assembly produced an invalid object (e.g. nonpositive mass entry)."""


class ConsistencyError(SpencerMirrorError, RuntimeError):
    """Two independent computation paths disagreed beyond tolerance."""


class NumericError(SpencerMirrorError, RuntimeError):
    """Solver failure: nonconvergence, singular matrix, non-SPD mass."""


class VerificationFailure(SpencerMirrorError, RuntimeError):
    """A verification claim (mirror equality, paper claim) did not hold."""
