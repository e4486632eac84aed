"""Exception types shared across the package.

Argument and domain problems raise ``ValueError`` subclasses so callers can
catch them uniformly; resource guards get their own class because the CLI
maps them to a distinct exit code.
"""


class EmptyLevelError(ValueError):
    """A per-level statistic was requested for a level with no nodes."""


class NotInImageError(ValueError):
    """The permutation is not the image of any recursive tree."""


class ResourceGuardError(RuntimeError):
    """A request exceeded a hard size guard (enumeration or DP limits)."""
