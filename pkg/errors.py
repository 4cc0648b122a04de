"""Exception hierarchy for lcert.

Business logic raises these; only the command-line layer turns them into
process exit codes (see ``exit_code_for``).
"""
from typing import Any, Dict, Optional


class LcertError(Exception):
    """Base class for every error raised by lcert."""
    exit_code: int = 2


class ParameterError(LcertError, ValueError):
    """An invalid numeric parameter or malformed input."""
    exit_code = 2


class SingularPointError(ParameterError):
    """Evaluation requested at a kernel singularity (e.g. an interval endpoint)."""


class ConfigurationError(LcertError):
    """An invalid combination of options, such as an operator/family mismatch."""
    exit_code = 2


class NumericError(LcertError, ArithmeticError):
    """A quadrature or refinement loop failed to converge.

    Attributes:
        diagnostics: Free-form details (levels used, last error estimate, ...)
    """
    exit_code = 3

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: Dict[str, Any] = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the command-line exit code.

    Args:
        exc: Exception raised while running a subcommand

    Returns:
        2 for parameter/configuration problems, 3 for numeric failures,
        2 for any other ValueError, 3 for anything else arithmetic.
    """
    if isinstance(exc, LcertError):
        return exc.exit_code
    if isinstance(exc, (ValueError, TypeError, KeyError)):
        return 2
    return 3
