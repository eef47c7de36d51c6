"""Exception hierarchy shared by all flowcast modules.

The CLI maps these onto exit codes:
    InputError / OSError  -> 2
    NumericalError        -> 3
    any other FlowcastError -> 1
"""

from typing import Optional


class FlowcastError(Exception):
    """Root of every error raised by flowcast code"""


class InputError(FlowcastError, ValueError):
    """Bad data, configuration or dimensions supplied by the caller"""


class ConfigError(InputError):
    """Invalid or inconsistent configuration value"""


class DimensionMismatchError(InputError):
    """Array shape does not match the model or block configuration"""


class CsvFormatError(InputError):
    """Malformed load CSV; carries the 1-based file line number when known"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class NumericalError(FlowcastError, ArithmeticError):
    """Numerical failure during computation"""


class NonFiniteError(NumericalError):
    """A value that must be finite was NaN or infinite"""

    def __init__(self, message: str, index: Optional[int] = None):
        self.index = index
        super().__init__(message)


class TrainingDivergenceError(NumericalError):
    """Training objective diverged (nll or critic estimate blew up)"""


class GraphError(FlowcastError, RuntimeError):
    """Misuse of the autodiff graph (non-scalar backward, freed parameter)"""


def exit_code_for(error: BaseException) -> int:
    """Process exit code for an exception raised by a command."""
    if isinstance(error, (InputError, OSError)):
        return 2
    if isinstance(error, NumericalError):
        return 3
    return 1
