"""
Errors - Exception hierarchy shared by the library and the CLI
"""

from typing import Dict, List, Optional


class ToolkitError(Exception):
    """Base class for every error raised by ngbs-toolkit"""

    exit_code = 1


class ParameterError(ToolkitError, ValueError):
    """Invalid state parameters, orders or run specifications"""

    exit_code = 1


class DomainError(ParameterError):
    """An order or argument for which the quantity is not defined"""


class ConvergenceError(ToolkitError):
    """A series or refinement loop did not reach its tolerance"""

    exit_code = 2

    def __init__(self, message: str, history: Optional[List[Dict]] = None):
        super().__init__(message)
        self.history = history or []


class OutputError(ToolkitError, OSError):
    """Output path cannot be written"""

    exit_code = 3
