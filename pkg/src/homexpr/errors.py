"""Exception types shared across the package."""


class HomexprError(Exception):
    """Base class for all package errors."""


class ParseError(HomexprError, ValueError):
    """Malformed graph6 or edge-list input.

    `offset` is the byte offset of the offending character where known.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class GraphValidationError(HomexprError, ValueError):
    """Input violates a Graph/RootedGraph invariant (self-loop, bad root, ...)."""


class DomainError(HomexprError, ValueError):
    """Operation called outside its stated domain (disconnected input, bad level, ...)."""


class ResourceLimitError(HomexprError, RuntimeError):
    """A configured size or search-budget limit was exceeded."""


class InternalConsistencyError(HomexprError, RuntimeError):
    """Two internal routes that must agree disagreed; never silently returned."""
