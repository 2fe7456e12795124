"""Exception hierarchy shared across the toolkit.

Exit-code mapping used by the CLI: usage errors exit 2 (argparse),
DomainError exits 3, NumericOverflowError exits 4, VerificationError
exits 5.
"""


class DomainError(ValueError):
    """Parameter combination outside the model's admissible domain."""


class DegeneratePathError(DomainError):
    """All-zero regressor: the OLS denominator vanishes."""


class NumericOverflowError(ArithmeticError):
    """A quantity left the representable range even after log-space rescaling."""


class VerificationError(RuntimeError):
    """One or more oracle checks failed."""
