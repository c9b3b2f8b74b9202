"""Exception hierarchy. Every failure carries a short reason and optional diagnostics."""


class LatticeError(Exception):
    def __init__(self, reason, **diagnostics):
        super().__init__(reason)
        self.reason = reason
        self.diagnostics = diagnostics


class MatrixFormatError(LatticeError, ValueError):
    """Malformed matrix file or array (ragged rows, wrong size, negative entries)."""


class EigensolverFailure(LatticeError):
    pass


class QuasiNilpotentInput(LatticeError):
    pass


class BandSeparationFailure(LatticeError):
    pass


class DichotomyUndetected(LatticeError):
    pass


class PreconditionViolation(LatticeError):
    pass


class HypothesisViolated(LatticeError):
    """The input does not satisfy the hypothesis needed for the peripheral structure."""


class SolverFailure(LatticeError):
    pass


class QuotientNotScalarZero(LatticeError):
    pass


class CertificateFailure(LatticeError):
    """A numerically verified postcondition did not hold (solver or conditioning problem)."""
