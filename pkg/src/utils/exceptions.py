"""
Custom exceptions for the lattice protein move explorer.

This module defines the exception classes raised by the lattice, model,
move-set, search and file handling code. Constraint inconsistency and
structure validation failures are reported as results, not exceptions;
the classes here cover invalid input and broken contracts.
"""

from typing import Any, Dict, Optional, Tuple


class LatticeProteinError(Exception):
    """Base exception class for lattice protein errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} - Details: {self.details}"
        return self.message


class LatticeError(LatticeProteinError):
    """Exception raised for lattice definition errors."""

    def __init__(self, message: str, lattice: Optional[str] = None, **kwargs):
        super().__init__(message, kwargs)
        self.lattice = lattice


class SequenceError(LatticeProteinError):
    """Exception raised for sequence errors."""

    def __init__(self, message: str, symbol: Optional[str] = None, **kwargs):
        super().__init__(message, kwargs)
        self.symbol = symbol


class StructureError(LatticeProteinError):
    """Exception raised for structure errors."""


class PotentialError(LatticeProteinError):
    """Exception raised for contact potential errors."""


class FileFormatError(LatticeProteinError):
    """Exception raised when a text file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, kwargs)
        self.line = line


class PdbError(LatticeProteinError):
    """Exception raised for PDB reading errors."""


class ValidationError(LatticeProteinError):
    """Exception raised for parameter validation errors."""

    def __init__(self, message: str, field: Optional[str] = None, value: Any = None, **kwargs):
        super().__init__(message, kwargs)
        self.field = field
        self.value = value


class ConfigurationError(LatticeProteinError):
    """Exception raised for configuration errors."""

    def __init__(self, message: str, config_key: Optional[str] = None, **kwargs):
        super().__init__(message, kwargs)
        self.config_key = config_key


class InvariantViolationError(LatticeProteinError):
    """Raised when an internal invariant does not hold. Always a bug."""


# Specific error types
class LatticeNotSupportedError(LatticeError):
    """Exception raised for an unknown lattice name."""

    pass


class InvalidSequenceError(SequenceError):
    """Exception raised for empty sequences or symbols outside the alphabet."""

    pass


class UnmappedSymbolError(SequenceError):
    """Exception raised when an H/P mapping has no entry for a residue."""

    pass


class InvalidStructureError(StructureError):
    """Exception raised when a structure violates a validity condition."""

    def __init__(self, message: str, violation: Any = None, **kwargs):
        super().__init__(message, kwargs)
        self.violation = violation


class StaleMoveError(StructureError):
    """Exception raised when a move does not fit the structure it is applied to."""

    pass


class GrowthFailureError(StructureError):
    """Exception raised when random chain growth exhausts its restarts."""

    pass


class PotentialFormatError(PotentialError, FileFormatError):
    """Exception raised when a potential matrix file cannot be parsed."""

    def __init__(self, message: str, line: Optional[int] = None, **kwargs):
        FileFormatError.__init__(self, message, line=line, **kwargs)


class AsymmetricPotentialError(PotentialError):
    """Exception raised when e(a,b) != e(b,a)."""

    def __init__(self, message: str, pair: Optional[Tuple[str, str]] = None, **kwargs):
        super().__init__(message, kwargs)
        self.pair = pair


class UnknownSymbolError(PotentialError):
    """Exception raised for a symbol the potential does not define."""

    def __init__(self, message: str, symbol: Optional[str] = None, **kwargs):
        super().__init__(message, kwargs)
        self.symbol = symbol


class StructureFormatError(FileFormatError):
    """Exception raised when a structure file cannot be parsed."""

    pass


class HPMappingFormatError(FileFormatError):
    """Exception raised when an H/P mapping file cannot be parsed."""

    pass


class ChainNotFoundError(PdbError):
    """Exception raised when the requested chain is absent."""

    pass


class NoAtomRecordsError(PdbError):
    """Exception raised when a PDB text contains no usable ATOM records."""

    pass


class InvalidParameterError(ValidationError):
    """Exception raised when a parameter value is invalid."""

    pass


class InvalidMoveIntervalError(ValidationError):
    """Exception raised when a move interval does not fit the structure."""

    pass


class LengthMismatchError(ValidationError):
    """Exception raised when paired inputs differ in length or model kind."""

    pass
