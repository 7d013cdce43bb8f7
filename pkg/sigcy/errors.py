"""
Exception hierarchy shared by all sigcy modules
"""


class SigcyError(Exception):
    """Base class for every error raised by sigcy"""


class FieldError(SigcyError):
    """Invalid field data: p = 2, composite modulus, unsupported degree, reducible modulus"""


class DimensionMismatch(SigcyError):
    """Shapes of matrices, subspaces or substitutions do not agree"""


class PreconditionError(SigcyError):
    """An operation was called outside its documented domain"""


class InconclusiveError(SigcyError):
    """A classification could not be decided; needs manual inspection"""


class VerificationFailure(SigcyError):
    """A structural invariant failed (hard failure, indicates a bug or a false claim)"""


class ThetaError(SigcyError):
    """Theta series cannot be evaluated reliably at the requested point"""
