"""Exceptions shared across the package."""


class FullGroupsError(Exception):
    pass


class SpaceMismatch(FullGroupsError):
    """Two operands live over different sequence spaces (or germ contexts)."""


class InvalidWord(FullGroupsError):
    """A word is not a prefix of any allowed infinite path."""


class StateBoundExceeded(FullGroupsError):
    """The lazy product closure of germ labels grew past the configured bound.

    The germ monoid is too large for exact computation at this bound;
    raise the bound or use a coarser presentation.
    """


class ValidationError(FullGroupsError):
    """A structural invariant failed (bad table, bad multisection, bad file)."""
