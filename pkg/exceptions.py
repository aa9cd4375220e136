"""
Custom exceptions for the valuations-at-infinity toolkit.
Provides specific, meaningful error types for different failure scenarios.

Every exception carries an ``exit_code`` used by the command line front end:
1 for usage, I/O and parse problems, 2 for mathematically invalid input and
3 when a search or expansion budget runs out.
"""
from typing import Any, List, Optional, Sequence


class ValuationSystemException(Exception):
    """Base exception for all toolkit errors."""
    exit_code = 2


# Configuration exceptions
class ConfigurationError(ValuationSystemException):
    """Raised when configuration is invalid."""
    exit_code = 1


class InvalidParameterError(ConfigurationError):
    """Raised when a parameter value is invalid."""

    def __init__(self, parameter: str, value: Any, reason: str):
        self.parameter = parameter
        self.value = value
        self.reason = reason
        msg = f"Invalid parameter '{parameter}' = {value}: {reason}"
        super().__init__(msg)


# Value arithmetic exceptions
class ValueArithmeticError(ValuationSystemException):
    """Raised when an operation on ordered values is undefined."""
    pass


class ValueKindMismatchError(ValueArithmeticError):
    """Raised when two values from different groups are combined."""

    def __init__(self, left_kind: str, right_kind: str, operation: str):
        self.left_kind = left_kind
        self.right_kind = right_kind
        self.operation = operation
        msg = f"Cannot apply '{operation}' to values of kind {left_kind} and {right_kind}"
        super().__init__(msg)


class NonPositiveDenominatorError(ValueArithmeticError):
    """Raised when a Euclidean division is requested by a non-positive value."""

    def __init__(self, denominator: Any):
        self.denominator = denominator
        super().__init__(f"Denominator must be positive in the group order, got {denominator}")


class InfiniteTailError(ValueArithmeticError):
    """Raised when folding a continued fraction that ends in an infinite digit."""

    def __init__(self):
        super().__init__("Continued fraction with an infinite tail has no finite value")


# Budget exceptions
class BudgetExhaustedError(ValuationSystemException):
    """Raised when a bounded computation does not finish within its budget."""
    exit_code = 3


class DigitBudgetExhaustedError(BudgetExhaustedError):
    """Raised when a continued fraction expansion exceeds its digit budget."""

    def __init__(self, budget: int, digits: Sequence[int]):
        self.budget = budget
        self.digits = list(digits)
        shown = ",".join(str(d) for d in self.digits[:8])
        msg = f"No stopping tail within {budget} digits (first digits: {shown}...)"
        super().__init__(msg)


class SemigroupBudgetError(BudgetExhaustedError):
    """Raised when a semigroup search or enumeration exceeds its budget."""

    def __init__(self, budget: int, operation: str):
        self.budget = budget
        self.operation = operation
        super().__init__(f"Semigroup {operation} exceeded its budget of {budget}")


# Delta sequence exceptions
class DeltaSequenceError(ValuationSystemException):
    """Base exception for delta-sequence construction and validation."""
    pass


class InvalidDeltaInputError(DeltaSequenceError):
    """Raised when the raw entries cannot form a delta-sequence at all."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(f"Invalid delta-sequence input: {reason}")


class InvalidCoreError(DeltaSequenceError):
    """Raised when a core fails one of the three semigroup conditions."""

    def __init__(self, entries: Sequence[Any], failures: List[str]):
        self.entries = list(entries)
        self.failures = list(failures)
        listed = ", ".join(str(e) for e in self.entries)
        msg = f"Core {{{listed}}} is not a delta-sequence: {'; '.join(self.failures)}"
        super().__init__(msg)


class ConstructionError(DeltaSequenceError):
    """Raised when a typed sequence cannot be built from the given data."""

    def __init__(self, sequence_type: str, reason: str):
        self.sequence_type = sequence_type
        self.reason = reason
        super().__init__(f"Type {sequence_type} construction failed: {reason}")


class WitnessNotFoundError(DeltaSequenceError):
    """Raised when a limit sequence has no rational witness cores."""

    def __init__(self, required: int, found: int, attempts: int):
        self.required = required
        self.found = found
        self.attempts = attempts
        msg = (f"Need {required} witness cores, found {found} "
               f"after {attempts} candidate scales")
        super().__init__(msg)


# Semigroup exceptions
class SemigroupError(ValuationSystemException):
    """Raised when a semigroup query is malformed."""
    pass


class UnboundedEnumerationError(SemigroupError):
    """Raised when an enumeration window contains infinitely many members."""

    def __init__(self, kind: str, reason: Optional[str] = None):
        self.kind = kind
        msg = f"Cannot enumerate an unbounded window of a {kind} semigroup"
        if reason:
            msg = f"{msg}: {reason}"
        super().__init__(msg)


# Proximity exceptions
class ProximityError(ValuationSystemException):
    """Raised when a cluster or dual graph cannot be built."""
    pass


# Polynomial exceptions
class PolynomialError(ValuationSystemException):
    """Base exception for polynomial parsing and arithmetic."""
    pass


class PolynomialSyntaxError(PolynomialError):
    """Raised when polynomial text does not follow the grammar."""
    exit_code = 1

    def __init__(self, text: str, position: int, message: str):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position} in '{text}'")


class ExponentOverflowError(PolynomialError):
    """Raised when a literal exponent or the degree of a power exceeds the configured limit."""
    exit_code = 1

    def __init__(self, exponent: int, limit: int):
        self.exponent = exponent
        self.limit = limit
        super().__init__(f"Exponent {exponent} exceeds the limit {limit}")


class ZeroPolynomialError(PolynomialError):
    """Raised when the zero polynomial is passed where it has no value."""

    def __init__(self, operation: str):
        self.operation = operation
        super().__init__(f"The zero polynomial is not allowed in {operation}")


class CommonFactorError(PolynomialError):
    """Raised when the resultant oracle sees a shared factor."""

    def __init__(self, factor: str):
        self.factor = factor
        super().__init__(f"Polynomials share the non-constant factor {factor}")


# Document exceptions
class DocumentError(ValuationSystemException):
    """Raised when a sequence document cannot be read."""
    exit_code = 1


class DocumentFormatError(DocumentError):
    """Raised when a document field is missing, extra or malformed."""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"Field '{field}': {reason}")


class DocumentNotFoundError(DocumentError):
    """Raised when a document file does not exist."""

    def __init__(self, file_path: str):
        self.file_path = file_path
        super().__init__(f"Document file not found: {file_path}")
