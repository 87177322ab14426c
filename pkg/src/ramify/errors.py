"""Exception hierarchy for the ramify package.

Math-layer failures all derive from RamifyError so the CLI can map them to
exit code 1 uniformly.
"""


class RamifyError(Exception):
    """Base class for all errors raised by ramify."""


class InsufficientPrecision(RamifyError):
    """An answer is not determined by the known terms of a truncated series."""


class WindowTooSmall(RamifyError):
    """The elimination window does not cover a monomial the reduction needs."""


class DependentGenerators(RamifyError):
    """Two Artin-Schreier generators span F_p-dependent cosets of K/K^wp."""


class WrongCharacteristic(RamifyError):
    """A group/operation was requested in a characteristic it does not exist in."""


class NonCoprimeValuation(RamifyError):
    """A break or valuation that must be coprime to p is not."""


class PreconditionViolated(RamifyError):
    """An operation was called outside its stated domain."""


class NonIntegralLower(RamifyError):
    """Break conversion produced a lower break that is not a positive integer coprime to p."""


class DegenerateTower(RamifyError):
    """Inputs describe a collapsed tower (every bound candidate vanished)."""


class SelfCheckFailed(RamifyError):
    """Two independent routes to the same quantity disagreed (internal bug trap)."""
