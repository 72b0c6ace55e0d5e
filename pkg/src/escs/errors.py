"""
Exception hierarchy for the ESCS outer surfaces.

Physical precondition violations inside the models raise plain ``ValueError``;
the classes below exist so the CLI can tell configuration problems, degenerate
fits and I/O failures apart.
"""

from pathlib import Path
from typing import Optional, Union


class ESCSError(Exception):
    """Base class for all ESCS errors"""


class ConfigError(ESCSError, ValueError):
    """Invalid scenario configuration"""


class ConfigParseError(ConfigError):
    """A configuration line could not be parsed"""

    def __init__(self, line_number: int, line: str, reason: str):
        self.line_number = line_number
        self.line = line
        super().__init__(f"line {line_number}: {reason}: {line.strip()!r}")


class UnknownConfigKeyError(ConfigError):
    """A configuration key is not part of the schema"""

    def __init__(self, key: str):
        self.key = key
        super().__init__(f"unknown configuration key '{key}'")


class ConfigValueError(ConfigError):
    """A configuration value violates a field invariant"""

    def __init__(self, key: str, reason: str):
        self.key = key
        super().__init__(f"invalid value for '{key}': {reason}")


class SingularFitError(ESCSError, ValueError):
    """Least-squares design matrix is rank deficient"""


class ReportWriteError(ESCSError, OSError):
    """Writing a report file failed"""

    def __init__(self, path: Union[str, Path], cause: Optional[BaseException] = None):
        self.path = Path(path)
        detail = f": {cause}" if cause is not None else ""
        super().__init__(f"failed to write {self.path}{detail}")
