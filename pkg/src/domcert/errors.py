"""Shared exception base for the package.

Every error raised deliberately by this package derives from DomcertError,
so callers (and the CLI) can catch one type and map it to an exit code.
"""


class DomcertError(Exception):
    pass
