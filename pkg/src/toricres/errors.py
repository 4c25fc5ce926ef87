"""Error type shared by every module; ``code`` is a stable machine-readable name."""

from __future__ import annotations


class ToricError(Exception):
    """Input or precondition failure with a named code such as ``NOT_IMMERSION``."""

    def __init__(self, code: str, message: str = ""):
        self.code = code
        self.message = message
        super().__init__(f"{code}: {message}" if message else code)
