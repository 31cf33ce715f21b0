"""Exception hierarchy shared by all modules.

Each class maps to one CLI exit code (see ``cli.EXIT_CODES``).
"""


class VzoptError(Exception):
    """Base class for all package errors."""


class ValidationError(VzoptError, ValueError):
    """Bad user input: out-of-range design, bad config, wrong dimensionality."""


class ConfigError(ValidationError):
    """Invalid optimizer configuration (e.g. too few probes per line)."""


class CatalogError(ValidationError, KeyError):
    """Unknown benchmark name."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown catalog entry"


class RangeError(ValidationError):
    """Numeric argument outside the supported range."""


class EmptyWindowError(ValidationError):
    """A frequency window selects no rows."""


class DegenerateSummaryError(ValidationError):
    """A fitness denominator factor is zero."""


class EvaluationError(VzoptError):
    """Objective returned a non-finite value."""

    def __init__(self, probe, step, value):
        self.probe, self.step, self.value = probe, step, value
        super().__init__(f"objective returned {value!r} for probe {probe} at step {step}")


class ParseError(VzoptError):
    """Malformed table or engine output."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EngineError(VzoptError):
    """Base for failures of the external modeling engine."""


class EngineSpawnError(EngineError):
    """The engine executable could not be started."""


class EngineExitError(EngineError):
    """The engine exited with a nonzero status."""

    def __init__(self, returncode, stderr=""):
        self.returncode = returncode
        super().__init__(f"engine exited with status {returncode}: {stderr.strip()[:200]}")


class EngineTimeoutError(EngineError):
    """The engine did not finish within the timeout."""


class EngineFailure(EngineError):
    """Output listing lacks the completion marker."""


class StaleOutputError(EngineError):
    """Output file ID does not match the deck that was written."""
