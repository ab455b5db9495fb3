"""Error types shared across the exporter."""

from __future__ import annotations


class ExporterError(Exception):
    """Configuration problem: bad job settings, CLI flags, or model ids."""


class ModelResolutionError(ExporterError):
    """The model id cannot be turned into a working encoder."""


class PairFormatError(Exception):
    """A pairs file is malformed; the message names the file and line."""

    def __init__(self, message: str, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line_no}: " if line_no is not None else f"{path}: "
        super().__init__(prefix + message)
