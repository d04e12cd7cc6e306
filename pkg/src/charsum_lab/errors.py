"""Shared exception types."""


class DomainError(ValueError):
    """An argument violated an operation's stated domain."""


class UsageError(Exception):
    """Bad command line or configuration input."""
