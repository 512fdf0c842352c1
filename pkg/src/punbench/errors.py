"""Exception types shared across the package.

Every failure mode raised by library code is a subclass of PunbenchError so
callers can catch one base class at the CLI boundary.  Validation failures map
to exit code 1; argparse usage failures map to exit code 2.
"""

from __future__ import annotations


class PunbenchError(Exception):
    """Base class for all library errors."""


class ResourceParseError(PunbenchError):
    """A lexical resource file is malformed.  Carries the 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class ResourceIntegrityError(PunbenchError):
    """A resource parsed cleanly but violates a structural guarantee
    (dangling synset reference, cyclic hypernym graph, manifest mismatch)."""


class WordNotFoundError(PunbenchError, LookupError):
    """A word required by an operation is absent from the resource."""


class TemplateError(PunbenchError):
    """A prompt template placeholder has no binding."""


class GenerationFormatError(PunbenchError):
    """Generator output could not be parsed into the expected fields.

    The unparseable text is preserved on ``raw`` for diagnostics.
    """

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw


class SampleValidityError(PunbenchError):
    """A generated sample violates one of its content invariants."""


class SubstitutionError(PunbenchError):
    """A negative-sample rewrite failed to remove or insert the required words."""


class ConfigurationError(PunbenchError):
    """Pipeline or client configuration is unusable (e.g. exhausted noun pool)."""


class TransportError(PunbenchError):
    """A live client gave up after exhausting its retries."""

    def __init__(self, message: str, attempts: int):
        super().__init__(f"{message} (after {attempts} attempt(s))")
        self.attempts = attempts


class JudgeFormatError(PunbenchError):
    """A pairwise judge reply contained no recognizable verdict."""


class HarnessError(PunbenchError):
    """The evaluation harness was invoked with unusable inputs."""


class ExportError(PunbenchError):
    """A dataset export precondition failed (e.g. positive without rationale)."""
