"""Exception hierarchy shared by every module."""

from __future__ import annotations


class RevopolyError(Exception):
    """Base class for all library errors."""


class ParameterDomainError(RevopolyError, ValueError):
    """A weight or polynomial parameter lies outside its admissible range."""


class IndexRangeError(RevopolyError, IndexError):
    """A basis index is out of range."""


class DomainError(RevopolyError, ValueError):
    """A point lies outside the set on which an operation is defined."""


class CapabilityError(RevopolyError, NotImplementedError):
    """The requested family, parity or parameter combination is unsupported."""
