"""Shared exception types, mapped to CLI exit codes by the front end."""


class DomainError(ValueError):
    """Input outside an operation's documented domain (CLI exit 2)."""


class QubitCapError(RuntimeError):
    """A register layout needs more qubits than the cap allows (CLI exit 3)."""
