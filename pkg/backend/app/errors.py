"""
Exception hierarchy for data and usage problems.

Verification failures are never raised: they are fields on the reports. These
exceptions cover malformed input files, impossible arguments and inconsistent
data, and the CLI maps all of them to exit status 2.
"""
from __future__ import annotations

from typing import Optional


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    def __init__(self, message: str, source: Optional[str] = None, line_number: Optional[int] = None):
        super().__init__(message)
        self.message = message
        self.source = source
        self.line_number = line_number

    def __str__(self) -> str:
        if self.source and self.line_number is not None:
            return f'{self.source}:{self.line_number}: {self.message}'
        if self.line_number is not None:
            return f'line {self.line_number}: {self.message}'
        if self.source:
            return f'{self.source}: {self.message}'
        return self.message


class CycleNotationError(ToolkitError):
    """Unknown token, repeated token or unbalanced parentheses in cycle notation."""


class DegreeMismatchError(ToolkitError):
    """Permutations acting on different domains were combined."""


class DimensionMismatchError(ToolkitError):
    """Matrices of non-conformable shapes were combined."""


class RepresentationError(ToolkitError):
    """A representation variant was built from data that violates its invariants."""


class CharacterTableError(ToolkitError):
    """Malformed or arithmetically inconsistent character-table file."""


class InconsistentCharacterData(CharacterTableError):
    """A Burnside average of character values is not a non-negative integer."""


class UnsupportedTableError(CharacterTableError):
    """Operation needs a complete integer-valued table."""


class CurveDataError(ToolkitError):
    """Malformed allcurves line."""


class SingularCurveError(CurveDataError):
    """Weierstrass equation with zero discriminant."""


class RootSystemError(ToolkitError):
    """Invalid (type, rank) pair or a rank too small for the requested construction."""


class BundleNotFoundError(ToolkitError):
    """Requested data bundle does not exist in the data directory."""
