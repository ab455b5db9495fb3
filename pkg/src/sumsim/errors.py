"""Exception types shared across the package."""


class SumsimError(Exception):
    """Base class for all library errors."""


class ConfigError(SumsimError):
    """Invalid run configuration; the CLI exits with status 1."""


class DataFormatError(SumsimError):
    """Malformed input data; the CLI exits with status 2.

    Carries the offending path and 1-based line number when known so batch
    runs can point at the exact record.
    """

    def __init__(self, message, path=None, line_no=None):
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line_no is not None:
                prefix += f"{line_no}:"
            prefix += " "
        super().__init__(prefix + message)
        self.path = path
        self.line_no = line_no


class DegenerateInputError(SumsimError):
    """Statistic is undefined for the given input (e.g. a constant series)."""
