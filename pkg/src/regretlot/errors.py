"""Semantic exception hierarchy.

Public functions never raise bare ValueError/ArithmeticError for contract
violations; they raise one of the classes below so callers (and the CLI exit
code mapping) can branch on failure kind.
"""


class RegretError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(RegretError, ValueError):
    """Inputs violate a construction contract."""


class NegativeProbability(ValidationError):
    """A probability entry is negative."""


class ProbabilitySumMismatch(ValidationError):
    """Lottery probabilities do not sum to one within tolerance."""


class LengthMismatch(ValidationError):
    """Outcome and probability sequences have different lengths."""


class EmptyLottery(ValidationError):
    """A lottery must carry at least one outcome."""


class TotalMassMismatch(ValidationError):
    """Joint probability entries do not sum to one within tolerance."""


class MarginalMismatch(ValidationError):
    """Joint matrix marginals disagree with the expected distributions."""


class InvalidParameter(ValidationError):
    """Kernel or utility parameters outside their admissible range."""


class DomainError(RegretError, ValueError):
    """A monetary value falls outside the utility curve's domain."""


class EvaluationOverflow(RegretError, OverflowError):
    """A kernel or score evaluation exceeds the representable float range."""

    def __init__(self, message: str, exponent: float | None = None):
        super().__init__(message)
        self.exponent = exponent


class OrderingViolation(RegretError):
    """A required preference or parameter ordering does not hold."""


class DegenerateIndifference(RegretError):
    """All three lotteries are mutually indifferent; the mixing weight is
    undetermined.  Raised only when the caller asks for strict handling;
    the default path returns a flagged result instead."""


class PreconditionViolation(RegretError):
    """A stated operation precondition was violated by the inputs."""


class NonSquareGrid(ValidationError):
    """Operation requires a joint lottery on a common (square) grid."""


class InvariantViolation(RegretError):
    """A structural invariant check failed; carries the offending entry."""

    def __init__(self, message: str, entry: tuple | None = None):
        super().__init__(message)
        self.entry = entry


class ShapeMismatch(ValidationError):
    """Matrix operands have incompatible shapes."""


class StateMismatch(ValidationError):
    """Acts being compared are defined over different state spaces."""


class BracketError(RegretError):
    """Root bracketing failed: no sign change over the search interval."""


class GenerationExhausted(RegretError):
    """Rejection sampling hit its attempt cap without an acceptable draw."""
